#include "dpmc/congruence.hpp"

#include <algorithm>
#include <unordered_set>

namespace dpmc {

CongruenceClosure::CongruenceClosure(AbstractContext& ctx) : ctx_(ctx) {
  add(ctx_.mk_true());
  add(ctx_.mk_false());
}

int CongruenceClosure::add(ATerm t) {
  if (auto it = index_.find(t); it != index_.end()) return it->second;
  if (t->kind == AKind::App)
    for (ATerm a : t->args) add(a);
  const int n = static_cast<int>(terms_.size());
  index_.emplace(t, n);
  terms_.push_back(t);
  parent_.push_back(n);
  size_.push_back(1);
  const bool is_const =
      t->kind == AKind::True || t->kind == AKind::False || t->is_const();
  const_node_.push_back(is_const ? n : -1);
  uses_.emplace_back();
  proof_.emplace_back();
  if (t->kind == AKind::App) {
    for (ATerm a : t->args) uses_[find_node(index_.at(a))].push_back(n);
    auto sig = signature(n);
    if (auto it = sigs_.find(sig); it != sigs_.end()) {
      pending_.push_back({n, it->second, -1, n, it->second});
      process_pending();
    } else {
      sigs_.emplace(std::move(sig), n);
    }
  }
  return n;
}

int CongruenceClosure::find_node(int n) {
  while (parent_[n] != n) {
    parent_[n] = parent_[parent_[n]];
    n = parent_[n];
  }
  return n;
}

int CongruenceClosure::find(ATerm t) { return find_node(add(t)); }

bool CongruenceClosure::equal(ATerm a, ATerm b) {
  process_pending();
  return find(a) == find(b);
}

ATerm CongruenceClosure::const_of(ATerm t) {
  process_pending();
  const int c = const_node_[find(t)];
  return c < 0 ? nullptr : terms_[c];
}

std::vector<int> CongruenceClosure::signature(int app) {
  std::vector<int> s{static_cast<int>(terms_[app]->sym->id)};
  for (ATerm a : terms_[app]->args) s.push_back(find_node(index_.at(a)));
  return s;
}

void CongruenceClosure::merge(ATerm a, ATerm b, int reason) {
  pending_.push_back({add(a), add(b), reason, -1, -1});
  process_pending();
}

void CongruenceClosure::assert_diseq(ATerm a, ATerm b, int reason) {
  diseqs_.push_back({add(a), add(b), reason});
}

void CongruenceClosure::process_pending() {
  while (!pending_.empty()) {
    const Pending p = pending_.back();
    pending_.pop_back();
    if (find_node(p.a) != find_node(p.b)) union_nodes(p.a, p.b, p.reason, p.ca, p.cb);
  }
}

void CongruenceClosure::union_nodes(int a, int b, int reason, int ca, int cb) {
  // Re-root a's proof tree, then hang it below b.
  int cur = a;
  Edge carried{};
  for (;;) {
    const Edge old = proof_[cur];
    proof_[cur] = carried;
    if (old.to == -1) break;
    carried = Edge{cur, old.reason, old.cong_a, old.cong_b};
    cur = old.to;
  }
  proof_[a] = Edge{b, reason, ca, cb};

  int ra = find_node(a), rb = find_node(b);
  if (size_[ra] > size_[rb]) std::swap(ra, rb);
  const int c1 = const_node_[ra], c2 = const_node_[rb];
  parent_[ra] = rb;
  size_[rb] += size_[ra];
  if (c2 < 0) const_node_[rb] = c1;
  if (c1 >= 0 && c2 >= 0 && !conflict_valid_) {
    std::vector<int> labels;
    explain_nodes(c1, c2, labels);
    set_conflict(std::move(labels));
  }
  for (int u : uses_[ra]) {
    auto sig = signature(u);
    auto [it, inserted] = sigs_.emplace(std::move(sig), u);
    if (!inserted && find_node(it->second) != find_node(u))
      pending_.push_back({u, it->second, -1, u, it->second});
  }
  auto& dst = uses_[rb];
  dst.insert(dst.end(), uses_[ra].begin(), uses_[ra].end());
  uses_[ra].clear();
}

void CongruenceClosure::explain_nodes(int a, int b, std::vector<int>& out) {
  std::vector<std::pair<int, int>> work{{a, b}};
  std::unordered_set<int> used_edges;
  while (!work.empty()) {
    auto [x, y] = work.back();
    work.pop_back();
    if (x == y) continue;
    std::unordered_set<int> anc;
    for (int n = x; n != -1; n = proof_[n].to) anc.insert(n);
    int common = y;
    while (!anc.count(common)) common = proof_[common].to;
    for (int start : {x, y}) {
      for (int n = start; n != common; n = proof_[n].to) {
        if (!used_edges.insert(n).second) continue;
        const Edge& e = proof_[n];
        if (e.reason >= 0) {
          out.push_back(e.reason);
        } else if (e.cong_a >= 0) {
          const auto& aa = terms_[e.cong_a]->args;
          const auto& bb = terms_[e.cong_b]->args;
          for (std::size_t i = 0; i < aa.size(); ++i)
            work.emplace_back(index_.at(aa[i]), index_.at(bb[i]));
        }
      }
    }
  }
}

std::vector<int> CongruenceClosure::explain(ATerm a, ATerm b) {
  process_pending();
  std::vector<int> out;
  explain_nodes(add(a), add(b), out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void CongruenceClosure::set_conflict(std::vector<int> labels) {
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  conflict_ = std::move(labels);
  conflict_valid_ = true;
}

bool CongruenceClosure::check() {
  process_pending();
  if (conflict_valid_) return false;
  for (const auto& d : diseqs_) {
    if (find_node(d.a) == find_node(d.b)) {
      std::vector<int> labels;
      explain_nodes(d.a, d.b, labels);
      labels.push_back(d.reason);
      set_conflict(std::move(labels));
      return false;
    }
  }
  return true;
}

bool CongruenceClosure::known_diseq(ATerm a, ATerm b) {
  process_pending();
  const int ra = find(a), rb = find(b);
  if (ra == rb) return false;
  if (const_node_[ra] >= 0 && const_node_[rb] >= 0) return true;
  for (const auto& d : diseqs_) {
    const int x = find_node(d.a), y = find_node(d.b);
    if ((x == ra && y == rb) || (x == rb && y == ra)) return true;
  }
  return false;
}

std::vector<ATerm> CongruenceClosure::members(ATerm t) {
  process_pending();
  const int r = find(t);
  std::vector<ATerm> out;
  for (std::size_t i = 0; i < terms_.size(); ++i)
    if (find_node(static_cast<int>(i)) == r) out.push_back(terms_[i]);
  return out;
}

}  // namespace dpmc
