#include <gtest/gtest.h>

#include "support.hpp"

namespace {

// Fails the run when any DPL produced by the tests is not BV-valid.
class DplAuditEnvironment : public ::testing::Environment {
 public:
  void TearDown() override {
    for (const auto& v : dpmc::test::dpl_audit().violations) ADD_FAILURE() << "invalid DPL: " << v;
  }
};

}  // namespace

int main(int argc, char** argv) {
  ::testing::InitGoogleTest(&argc, argv);
  ::testing::AddGlobalTestEnvironment(new DplAuditEnvironment);
  return RUN_ALL_TESTS();
}
