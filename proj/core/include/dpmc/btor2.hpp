#pragma once

#include <istream>
#include <string>
#include <string_view>

#include "dpmc/transition_system.hpp"

namespace dpmc {

/// Parses the supported BTOR2 subset. The single bad node is negated to
/// form the property.
///
/// Throws ParseError on malformed input and UnsupportedFeature for nodes
/// outside the fragment (arrays, concat, slice, signed ops, ...).
TransitionSystem parse_btor2(std::istream& in);
TransitionSystem parse_btor2(std::string_view text);
TransitionSystem parse_btor2_file(const std::string& path);

/// Prints a system in the same BTOR2 subset; booleans become bitvec 1.
std::string print_btor2(const TransitionSystem& ts);

}  // namespace dpmc
