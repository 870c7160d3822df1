#include <algorithm>
#include <cmath>

#include "relcheck/eval.hpp"

namespace relcheck {

namespace {

// Number of admissible range subsets for one domain tuple.
long double choice_count(Mult mult, int range) {
  long double r = static_cast<long double>(range);
  switch (mult) {
    case Mult::Set: return std::pow(2.0L, r);
    case Mult::Some: return std::pow(2.0L, r) - 1;
    case Mult::One: return r;
    case Mult::Lone: return r + 1;
  }
  return 0;
}

class Enumerator {
 public:
  Enumerator(const Model& m, std::function<bool(const Instance&)> fn, long long budget,
             long long& visited)
      : m_(m), fn_(std::move(fn)), budget_(budget), visited_(visited) {}

  // Returns false when the callback stopped the walk early.
  bool run(const std::vector<int>& sizes) {
    std::vector<SigId> tops = m_.top_sigs();
    if (sizes.size() != tops.size())
      throw Error(ErrorKind::Internal, "size vector does not match top-level signatures");

    inst_ = Instance{};
    placeable_.clear();
    for (size_t i = 0; i < tops.size(); i++) {
      std::vector<SigId> options;
      for (SigId s : m_.subtree(tops[i]))
        if (!m_.sig(s).is_abstract) options.push_back(s);
      if (options.empty() && sizes[i] > 0) return true;  // no way to place atoms
      for (int j = 0; j < sizes[i]; j++) {
        inst_.atom_names.push_back(m_.sig(tops[i]).name + "$" + std::to_string(j));
        inst_.atom_sig.push_back(-1);
        placeable_.push_back(options);
      }
    }
    check_budget_estimate(sizes, tops);
    stopped_ = false;
    place(0);
    return !stopped_;
  }

 private:
  const Model& m_;
  std::function<bool(const Instance&)> fn_;
  long long budget_;
  long long& visited_;
  Instance inst_;
  std::vector<std::vector<SigId>> placeable_;  // per atom
  bool stopped_ = false;

  void check_budget_estimate(const std::vector<int>& sizes, const std::vector<SigId>& tops) {
    long double est = 1;
    for (const auto& options : placeable_) est *= static_cast<long double>(options.size());
    auto top_size = [&](SigId top) {
      for (size_t i = 0; i < tops.size(); i++)
        if (tops[i] == top) return sizes[i];
      return 0;
    };
    // Upper bound: every column's extent is at most its top signature's size.
    std::vector<long double> max_tuples(m_.fields.size(), 0);
    for (size_t f = 0; f < m_.fields.size(); f++) {
      const Field& field = m_.fields[f];
      long double prefix;
      if (field.restriction) {
        prefix = max_tuples[static_cast<size_t>(*field.restriction)];
      } else {
        prefix = 1;
        for (size_t c = 0; c + 1 < field.cols.size(); c++)
          prefix *= static_cast<long double>(top_size(m_.sig(field.cols[c]).top));
      }
      int range = top_size(m_.sig(field.cols.back()).top);
      max_tuples[f] = prefix * static_cast<long double>(range);
      est *= std::pow(choice_count(field.mult, range), prefix);
      if (est > static_cast<long double>(budget_) * 4)
        throw Error(ErrorKind::Budget,
                    "instance enumeration would exceed the configured budget");
    }
  }

  void place(size_t atom) {
    if (stopped_) return;
    if (atom == inst_.atom_names.size()) {
      fill_field(0);
      return;
    }
    for (SigId s : placeable_[atom]) {
      inst_.atom_sig[atom] = s;
      place(atom + 1);
      if (stopped_) return;
    }
  }

  void fill_field(size_t f) {
    if (stopped_) return;
    if (f == m_.fields.size()) {
      visit();
      return;
    }
    const Field& field = m_.fields[f];

    std::vector<Tuple> prefixes;
    if (field.restriction) {
      for (const auto& t : inst_.rel_extent[*field.restriction]) prefixes.push_back(t);
    } else {
      prefixes.push_back({});
      for (size_t c = 0; c + 1 < field.cols.size(); c++) {
        std::vector<Tuple> grown;
        for (const auto& p : prefixes)
          for (int a : inst_.extent(m_, field.cols[c])) {
            Tuple t = p;
            t.push_back(a);
            grown.push_back(std::move(t));
          }
        prefixes.swap(grown);
      }
    }
    std::vector<int> range = inst_.extent(m_, field.cols.back());

    TupleSet& table = inst_.rel_extent[static_cast<FieldId>(f)];
    table.clear();
    fill_prefix(f, field, prefixes, range, 0);
    inst_.rel_extent.erase(static_cast<FieldId>(f));
  }

  // Choose the range subset for prefixes[i] and recurse.
  void fill_prefix(size_t f, const Field& field, const std::vector<Tuple>& prefixes,
                   const std::vector<int>& range, size_t i) {
    if (stopped_) return;
    if (i == prefixes.size()) {
      fill_field(f + 1);
      return;
    }
    TupleSet& table = inst_.rel_extent[static_cast<FieldId>(f)];
    auto with_subset = [&](const std::vector<int>& chosen) {
      std::vector<Tuple> added;
      for (int y : chosen) {
        Tuple t = prefixes[i];
        t.push_back(y);
        if (table.insert(t).second) added.push_back(std::move(t));
      }
      fill_prefix(f, field, prefixes, range, i + 1);
      for (const auto& t : added) table.erase(t);
    };

    size_t r = range.size();
    switch (field.mult) {
      case Mult::Set:
      case Mult::Some: {
        unsigned long long start = field.mult == Mult::Some ? 1 : 0;
        for (unsigned long long mask = start; mask < (1ull << r); mask++) {
          std::vector<int> chosen;
          for (size_t b = 0; b < r; b++)
            if (mask & (1ull << b)) chosen.push_back(range[b]);
          with_subset(chosen);
          if (stopped_) return;
        }
        return;
      }
      case Mult::One:
        for (int y : range) {
          with_subset({y});
          if (stopped_) return;
        }
        return;
      case Mult::Lone:
        with_subset({});
        if (stopped_) return;
        for (int y : range) {
          with_subset({y});
          if (stopped_) return;
        }
        return;
    }
  }

  void visit() {
    if (++visited_ > budget_)
      throw Error(ErrorKind::Budget, "instance enumeration exceeded the configured budget");
    if (!fn_(inst_)) stopped_ = true;
  }
};

}  // namespace

bool for_each_instance(const Model& m, const std::vector<int>& sizes,
                       const std::function<bool(const Instance&)>& fn) {
  long long visited = 0;
  Enumerator e(m, fn, EnumLimits{}.max_instances, visited);
  return e.run(sizes);
}

std::optional<Instance> enumerate_check(const Model& m, const CoreExpr& assertion,
                                        const EnumLimits& limits) {
  std::vector<SigId> tops = m.top_sigs();

  // All size vectors, smallest total first so counterexamples come minimal.
  std::vector<std::vector<int>> combos{{}};
  for (size_t i = 0; i < tops.size(); i++) {
    std::vector<std::vector<int>> grown;
    for (const auto& c : combos)
      for (int n = 0; n <= limits.max_atoms_per_top; n++) {
        auto v = c;
        v.push_back(n);
        grown.push_back(std::move(v));
      }
    combos.swap(grown);
  }
  std::stable_sort(combos.begin(), combos.end(),
                   [](const std::vector<int>& a, const std::vector<int>& b) {
                     int sa = 0, sb = 0;
                     for (int x : a) sa += x;
                     for (int x : b) sb += x;
                     return sa < sb;
                   });

  std::optional<Instance> found;
  long long visited = 0;
  for (const auto& sizes : combos) {
    auto fn = [&](const Instance& inst) {
      EvalEnv env;
      for (const auto& fact : m.facts)
        if (!eval_formula(m, inst, *fact.body, env)) return true;
      if (eval_formula(m, inst, assertion, env)) return true;
      found = inst;
      return false;
    };
    Enumerator e(m, fn, limits.max_instances, visited);
    if (!e.run(sizes)) return found;
  }
  return std::nullopt;
}

}  // namespace relcheck
