#pragma once

// Proof trees with optional backedges.  A wellfounded proof is a CyclicProof
// with an empty backedge map.  Rep leaves stand for a jump back to an
// ancestor ("companion") with the same sequent; validity asks for a
// progressing rule application strictly between companion and rep.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "bimodal/calculus.hpp"

namespace bimodal {

struct Proof;
using ProofPtr = std::shared_ptr<const Proof>;
using Path = std::vector<size_t>;

struct Proof {
  RuleInstance node;
  std::vector<ProofPtr> children;
};

inline ProofPtr pnode(RuleInstance r, std::vector<ProofPtr> kids = {}) {
  if (kids.size() != r.premises.size())
    throw shape_error("pnode: arity mismatch for '" + r.rule + "'");
  for (size_t i = 0; i < kids.size(); ++i) {
    if (!kids[i]) throw shape_error("pnode: null child");
    if (!(kids[i]->node.conclusion == r.premises[i]))
      throw shape_error("pnode: child " + std::to_string(i) + " proves " +
                        print(kids[i]->node.conclusion) + " but '" + r.rule +
                        "' expects " + print(r.premises[i]));
  }
  return std::make_shared<Proof>(Proof{std::move(r), std::move(kids)});
}

struct CyclicProof {
  ProofPtr root;
  std::map<Path, Path> backedges;  // rep path -> companion path
};

inline CyclicProof make_proof(ProofPtr root) { return CyclicProof{std::move(root), {}}; }

inline const Sequent& conclusion_of(const CyclicProof& p) {
  if (!p.root) throw shape_error("empty proof");
  return p.root->node.conclusion;
}

inline const Proof* node_at(const ProofPtr& root, const Path& path) {
  const Proof* v = root.get();
  for (size_t i : path) {
    if (!v || i >= v->children.size()) throw shape_error("node_at: path leaves the tree");
    v = v->children[i].get();
  }
  if (!v) throw shape_error("node_at: null node");
  return v;
}

inline bool proper_prefix(const Path& a, const Path& b) {
  if (a.size() >= b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

// ---- statistics -------------------------------------------------------------

inline size_t proof_size(const ProofPtr& p) {
  size_t n = 1;
  for (const auto& c : p->children) n += proof_size(c);
  return n;
}

inline size_t proof_height(const ProofPtr& p) {
  size_t h = 0;
  for (const auto& c : p->children) h = std::max(h, 1 + proof_height(c));
  return h;
}

// ---- checking ---------------------------------------------------------------

struct ProofCheck {
  bool ok = true;
  std::string reason;
  Path where;
  explicit operator bool() const { return ok; }
};

inline ProofCheck fail_proof(std::string reason, Path where) {
  return ProofCheck{false, std::move(reason), std::move(where)};
}

// Validates rule instances, tree structure, backedges and the progress
// condition.  With allow_open, "open" leaves are accepted as unproven goals.
inline ProofCheck check_proof(const Calculus& c, const CyclicProof& p,
                              bool allow_open = false) {
  if (!p.root) return fail_proof("empty proof", {});
  std::set<Path> reps;

  // pass 1: rules and local structure, first failure in preorder
  const std::function<ProofCheck(const Proof*, Path)> walk =
      [&](const Proof* v, Path path) -> ProofCheck {
    if (v->node.rule == "rep") {
      if (!v->children.empty()) return fail_proof("rep leaf with children", path);
      reps.insert(path);
    } else if (v->node.rule == "open") {
      if (!allow_open) return fail_proof("open goal", path);
      if (!v->children.empty()) return fail_proof("open leaf with children", path);
    } else {
      if (auto r = check_instance(c, v->node); !r.ok)
        return fail_proof(v->node.rule + ": " + r.reason, path);
      if (v->children.size() != v->node.premises.size())
        return fail_proof("wrong number of subproofs", path);
      for (size_t i = 0; i < v->children.size(); ++i)
        if (!(v->children[i]->node.conclusion == v->node.premises[i]))
          return fail_proof("subproof " + std::to_string(i) +
                                " does not prove the premise",
                            path);
    }
    for (size_t i = 0; i < v->children.size(); ++i) {
      Path q = path;
      q.push_back(i);
      if (auto r = walk(v->children[i].get(), std::move(q)); !r.ok) return r;
    }
    return {};
  };
  if (auto r = walk(p.root.get(), {}); !r.ok) return r;

  // pass 2: backedges
  for (const auto& [w, target] : p.backedges)
    if (!reps.count(w))
      return fail_proof("backedge source is not a rep leaf", w);
  for (const Path& w : reps) {
    auto it = p.backedges.find(w);
    if (it == p.backedges.end()) return fail_proof("rep leaf without backedge", w);
    const Path& t = it->second;
    if (!proper_prefix(t, w))
      return fail_proof("companion is not a strict ancestor", w);
    const Proof* rep = node_at(p.root, w);
    const Proof* comp = node_at(p.root, t);
    if (!(rep->node.conclusion == comp->node.conclusion))
      return fail_proof("companion sequent differs from the rep sequent", w);
    bool progress = false;
    const Proof* v = comp;
    for (size_t k = t.size(); k < w.size() && !progress; ++k) {
      size_t j = w[k];
      for (size_t g : v->node.progressing)
        if (g == j) progress = true;
      v = v->children[j].get();
    }
    if (!progress)
      return fail_proof("no progressing step between companion and rep", w);
  }
  return {};
}

// ---- local fragment ---------------------------------------------------------

namespace detail {

// Follows non-progressing edges from the root, resolving rep leaves to their
// companions.  Valid proofs cannot loop here (every cycle progresses), so a
// revisit of an in-progress vertex means the proof is broken.
struct LocalWalker {
  const CyclicProof& p;
  std::map<Path, int> memo;
  std::set<Path> in_progress;
  std::set<Path> fragment;

  explicit LocalWalker(const CyclicProof& pr) : p(pr) {}

  int height(const Path& path) {
    if (auto it = memo.find(path); it != memo.end()) return it->second;
    if (!in_progress.insert(path).second)
      throw shape_error("local fragment contains a non-progressing cycle");
    const Proof* v = node_at(p.root, path);
    int h = 0;
    if (v->node.rule == "rep") {
      auto it = p.backedges.find(path);
      if (it == p.backedges.end()) throw shape_error("rep leaf without backedge");
      h = height(it->second);
    } else {
      fragment.insert(path);
      for (size_t i = 0; i < v->children.size(); ++i) {
        bool prog = false;
        for (size_t g : v->node.progressing) prog = prog || g == i;
        if (prog) continue;
        Path q = path;
        q.push_back(i);
        h = std::max(h, 1 + height(q));
      }
    }
    in_progress.erase(path);
    memo[path] = h;
    return h;
  }
};

}  // namespace detail

inline int local_height(const CyclicProof& p) {
  detail::LocalWalker w(p);
  return w.height({});
}

// vertex paths of the root's local fragment (companions, not rep leaves)
inline std::vector<Path> local_fragment(const CyclicProof& p) {
  detail::LocalWalker w(p);
  w.height({});
  return std::vector<Path>(w.fragment.begin(), w.fragment.end());
}

inline bool locally_cut_free(const CyclicProof& p) {
  for (const Path& q : local_fragment(p))
    if (node_at(p.root, q)->node.rule == "cut") return false;
  return true;
}

// ---- subproof extraction ----------------------------------------------------

namespace detail {

struct Extractor {
  const CyclicProof& p;
  std::map<Path, Path> out_backedges;
  // scope: original companion node -> path of its copy on the current branch
  std::map<const Proof*, Path> scope;

  explicit Extractor(const CyclicProof& pr) : p(pr) {}

  ProofPtr copy(const Path& orig, const Path& here) {
    const Proof* v = node_at(p.root, orig);
    if (v->node.rule == "rep") {
      auto it = p.backedges.find(orig);
      if (it == p.backedges.end()) throw shape_error("rep leaf without backedge");
      const Proof* comp = node_at(p.root, it->second);
      if (auto sc = scope.find(comp); sc != scope.end()) {
        out_backedges[here] = sc->second;
        return pnode(rules::rep(v->node.conclusion));
      }
      return copy(it->second, here);  // companion out of scope: inline it
    }
    // save-restore so reps always resolve to the nearest enclosing copy
    std::optional<Path> prev;
    if (auto sc = scope.find(v); sc != scope.end()) prev = sc->second;
    scope[v] = here;
    std::vector<ProofPtr> kids;
    for (size_t i = 0; i < v->children.size(); ++i) {
      Path o = orig;
      Path h = here;
      o.push_back(i);
      h.push_back(i);
      kids.push_back(copy(o, h));
    }
    if (prev)
      scope[v] = *prev;
    else
      scope.erase(v);
    return pnode(v->node, std::move(kids));
  }
};

}  // namespace detail

// Stand-alone proof of the sequent at `path`.  Backedges into the subtree are
// kept; backedges leaving it are unfolded by inlining their companions, which
// terminates because unresolved companions move strictly towards the root.
inline CyclicProof extract_subproof(const CyclicProof& p, const Path& path) {
  detail::Extractor ex(p);
  ProofPtr root = ex.copy(path, {});
  return CyclicProof{root, std::move(ex.out_backedges)};
}

// child component as a proof in its own right
inline CyclicProof child_proof(const CyclicProof& p, size_t i) {
  return extract_subproof(p, {i});
}

// ---- identity proofs --------------------------------------------------------

// proof of  f, restL  =>  f, restR  in any of the G/N calculi
inline ProofPtr identity_proof(const Calculus& c, const Formula& f,
                               const Multiset& restL = {}, const Multiset& restR = {},
                               Mode mode = Mode::Plain) {
  if (is_tpl(c.id)) throw shape_error("identity_proof: template calculi unsupported");
  switch (f.kind()) {
    case Kind::Var: return pnode(rules::ax(f, restL, restR, mode));
    case Kind::Bot:
      return pnode(rules::botL(restL, msops::sum(restR, {f}), mode));
    case Kind::Imp: {
      const Formula a = f.left(), b = f.right();
      ProofPtr left = identity_proof(c, a, restL, msops::sum(restR, {b}), mode);
      ProofPtr right = identity_proof(c, b, msops::sum(restL, {a}), restR, mode);
      ProofPtr mid = pnode(rules::impL(f, msops::sum(restL, {a}),
                                       msops::sum(restR, {b}), mode),
                           {left, right});
      return pnode(rules::impR(f, msops::sum(restL, {f}), restR, mode), {mid});
    }
    case Kind::Box: {
      const int i = f.index();
      const Formula body = f.body();
      Multiset sigma[2];
      sigma[i] = ms({body});
      RuleInstance m = rules::modal(c.id, i, body, sigma[0], sigma[1], restL, restR,
                                    mode);
      const Sequent& prem = m.premises[0];
      Multiset inner_rest = msops::diff(prem.left, {body});
      return pnode(std::move(m),
                   {identity_proof(c, body, inner_rest, {}, prem.mode)});
    }
  }
  throw shape_error("identity_proof: unreachable");
}

}  // namespace bimodal
