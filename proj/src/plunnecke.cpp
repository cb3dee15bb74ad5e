#include "sumlab/plunnecke.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <string>

#include "sumlab/automaton.hpp"
#include "sumlab/errors.hpp"

namespace sumlab {

namespace {

constexpr long kSmall = 1L << 60;

// Values that fit comfortably in a machine word, or nullopt.
bool small_values(const std::vector<BigInt>& v, std::vector<long>& out) {
  out.clear();
  out.reserve(v.size());
  for (const auto& x : v) {
    if (!x.fits_slong_p()) return false;
    long y = x.get_si();
    if (y > kSmall / 8 || y < -kSmall / 8) return false;
    out.push_back(y);
  }
  return true;
}

std::vector<long> small_sumset(const std::vector<long>& a, const std::vector<long>& b) {
  std::vector<long> out;
  out.reserve(a.size() * b.size());
  for (long x : a)
    for (long y : b) out.push_back(x + y);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<BigInt> to_big(const std::vector<long>& v) {
  std::vector<BigInt> out;
  out.reserve(v.size());
  for (long x : v) out.emplace_back(x);
  return out;
}

std::vector<BigInt> big_sumset(const std::vector<BigInt>& a, const std::vector<BigInt>& b) {
  std::vector<long> sa, sb;
  if (small_values(a, sa) && small_values(b, sb)) return to_big(small_sumset(sa, sb));
  std::vector<BigInt> out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a)
    for (const auto& y : b) out.push_back(x + y);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Size of the union of [c - l + 1, c] over sorted cells c, clipped to i >= 0.
BigInt window_count(const std::vector<BigInt>& cells, std::size_t l) {
  BigInt total = 0;
  BigInt covered = -1;  // last index counted
  for (const auto& c : cells) {
    BigInt lo = c - static_cast<unsigned long>(l - 1);
    if (lo < 0) lo = 0;
    if (lo <= covered) lo = covered + 1;
    if (c >= lo) total += c - lo + 1;
    if (c > covered) covered = c;
  }
  return total;
}

}  // namespace

FiniteIntSet FiniteIntSet::from_unsorted(std::vector<BigInt> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  FiniteIntSet s;
  s.elems_ = std::move(values);
  return s;
}

FiniteIntSet FiniteIntSet::from_ints(const std::vector<long>& values) { return from_unsorted(to_big(values)); }

FiniteIntSet sumset(const FiniteIntSet& e, const FiniteIntSet& f) {
  FiniteIntSet s;
  s = FiniteIntSet::from_unsorted(big_sumset(e.elements(), f.elements()));
  return s;
}

FiniteIntSet iterated_sumset(const FiniteIntSet& f, std::size_t l) {
  if (l == 0) throw ConfigError("iterated sumset needs l >= 1");
  std::vector<long> sf;
  if (small_values(f.elements(), sf)) {
    std::vector<long> acc = sf;
    for (std::size_t i = 1; i < l; ++i) acc = small_sumset(acc, sf);
    return FiniteIntSet::from_unsorted(to_big(acc));
  }
  FiniteIntSet acc = f;
  for (std::size_t i = 1; i < l; ++i) acc = sumset(acc, f);
  return acc;
}

RuzsaReport ruzsa_check(const FiniteIntSet& e, const FiniteIntSet& f, std::size_t l) {
  if (e.empty()) throw ConfigError("ruzsa_check needs a nonempty E");
  RuzsaReport r;
  const BigInt ne = static_cast<unsigned long>(e.size());
  r.sum_size = static_cast<unsigned long>(sumset(e, f).size());
  r.iterated_size = static_cast<unsigned long>(iterated_sumset(f, l).size());
  r.K = Rational(r.sum_size, ne);
  r.K.canonicalize();
  r.bound = power(r.K, static_cast<unsigned>(l)) * Rational(ne);
  // |lF| <= K^l |E|  <=>  |lF| |E|^l <= |E+F|^l |E|
  BigInt lhs, rhs, el, sl;
  mpz_pow_ui(el.get_mpz_t(), ne.get_mpz_t(), l);
  mpz_pow_ui(sl.get_mpz_t(), r.sum_size.get_mpz_t(), l);
  lhs = r.iterated_size * el;
  rhs = sl * ne;
  r.holds = lhs <= rhs;
  return r;
}

// ---------------------------------------------------------------- samples

PointSample PointSample::from_integers(std::vector<BigInt> nums, BigInt den) {
  if (den <= 0) throw ConfigError("sample denominator must be positive");
  for (const auto& n : nums)
    if (n < 0) throw ConfigError("sample points must be nonnegative");
  std::sort(nums.begin(), nums.end());
  nums.erase(std::unique(nums.begin(), nums.end()), nums.end());
  PointSample p;
  p.den_ = std::move(den);
  p.nums_ = std::move(nums);
  return p;
}

PointSample PointSample::from_rationals(const std::vector<Rational>& points) {
  BigInt den = 1;
  for (const auto& x : points) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
  std::vector<BigInt> nums;
  nums.reserve(points.size());
  for (const auto& x : points) nums.push_back(x.get_num() * (den / x.get_den()));
  return from_integers(std::move(nums), std::move(den));
}

PointSample PointSample::parse(std::istream& in) {
  std::vector<Rational> pts;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    try {
      pts.push_back(parse_rational(line.substr(b, e - b + 1)));
    } catch (const ConfigError& err) {
      throw ConfigError("sample line " + std::to_string(lineno) + ": " + err.what());
    }
  }
  return from_rationals(pts);
}

std::vector<Rational> PointSample::points() const {
  std::vector<Rational> out;
  for (const auto& n : nums_) {
    Rational x(n, den_);
    x.canonicalize();
    out.push_back(x);
  }
  return out;
}

PointSample sample_sum(const PointSample& a, const PointSample& b) {
  BigInt den;
  mpz_lcm(den.get_mpz_t(), a.denominator().get_mpz_t(), b.denominator().get_mpz_t());
  auto scale = [&](const PointSample& s) {
    std::vector<BigInt> v;
    const BigInt f = den / s.denominator();
    for (const auto& n : s.numerators()) v.push_back(n * f);
    return v;
  };
  return PointSample::from_integers(big_sumset(scale(a), scale(b)), den);
}

PointSample sample_iterated(const PointSample& a, std::size_t l) {
  if (l == 0) throw ConfigError("iterated sample sum needs l >= 1");
  auto f = iterated_sumset(FiniteIntSet::from_unsorted(a.numerators()), l);
  return PointSample::from_integers(f.elements(), a.denominator());
}

FiniteIntSet dyadic_cells(const PointSample& x, std::size_t j) {
  std::vector<BigInt> cells;
  cells.reserve(x.size());
  const BigInt& den = x.denominator();
  if (mpz_popcount(den.get_mpz_t()) == 1) {
    // power-of-two denominator: a shift
    const std::size_t dbits = mpz_sizeinbase(den.get_mpz_t(), 2) - 1;
    std::vector<long> small;
    if (j <= dbits && small_values(x.numerators(), small)) {
      std::vector<long> c;
      c.reserve(small.size());
      for (long n : small) c.push_back(n >> (dbits - j));
      c.erase(std::unique(c.begin(), c.end()), c.end());
      return FiniteIntSet::from_unsorted(to_big(c));
    }
  }
  BigInt c;
  for (const auto& n : x.numerators()) {
    BigInt shifted = n;
    mpz_mul_2exp(shifted.get_mpz_t(), n.get_mpz_t(), j);
    mpz_fdiv_q(c.get_mpz_t(), shifted.get_mpz_t(), den.get_mpz_t());
    cells.push_back(c);
  }
  return FiniteIntSet::from_unsorted(std::move(cells));
}

BigInt dyadic_count(const PointSample& x, std::size_t j, std::size_t l) {
  if (l == 0) throw ConfigError("window width must be at least 1");
  return window_count(dyadic_cells(x, j).elements(), l);
}

SpecDyadicCount dyadic_count(const SetSpec& s, std::size_t j, std::size_t l) {
  if (l == 0) throw ConfigError("window width must be at least 1");
  SpecDyadicCount r;
  r.count = prefix_count(s, j).upper * static_cast<unsigned long>(l);
  r.upper_bound = l > 1;
  return r;
}

// ---------------------------------------------------------------- checks

Prop31Report prop31_check(const PointSample& a, const PointSample& b, std::size_t l, std::size_t j_min,
                          std::size_t j_max) {
  if (a.size() == 0 || b.size() == 0) throw ConfigError("prop31_check needs nonempty samples");
  if (l < 1 || j_min > j_max) throw ConfigError("prop31_check: bad fold or scale range");
  Prop31Report r;
  r.fold = l;
  const PointSample lb = sample_iterated(b, l);
  const PointSample ab = sample_sum(a, b);
  double best = 0;
  for (std::size_t j = j_min; j <= j_max; ++j) {
    Prop31Scale sc;
    sc.j = j;
    sc.lhs = dyadic_count(lb, j, l);
    sc.d1_a = dyadic_count(a, j, 1);
    sc.d2_ab = dyadic_count(ab, j, 2);
    BigInt d2l, d1l;
    mpz_pow_ui(d2l.get_mpz_t(), sc.d2_ab.get_mpz_t(), l);
    mpz_pow_ui(d1l.get_mpz_t(), sc.d1_a.get_mpz_t(), l - 1);
    const BigInt left = sc.lhs * d1l;
    sc.holds_stated = left <= d2l * static_cast<unsigned long>(l + 1);
    sc.holds_certified = left <= d2l * static_cast<unsigned long>(2 * l - 1);
    const double jd = j == 0 ? 1.0 : static_cast<double>(j);
    sc.exponent_lhs = log2_of(sc.lhs) / jd;
    sc.exponent_a = log2_of(sc.d1_a) / jd;
    sc.exponent_ab = log2_of(sc.d2_ab) / jd;
    sc.implied_bound = static_cast<double>(l) * sc.exponent_ab - static_cast<double>(l - 1) * sc.exponent_a +
                       std::log2(static_cast<double>(l + 1)) / jd;
    r.all_stated = r.all_stated && sc.holds_stated;
    r.all_certified = r.all_certified && sc.holds_certified;
    if (r.scales.empty() || sc.exponent_ab < best) {
      best = sc.exponent_ab;
      r.argmin_ab = j;
      r.implied_at_argmin = sc.implied_bound;
    }
    r.scales.push_back(std::move(sc));
  }
  return r;
}

CoverBoundReport sumset_cover_bound_check(const std::vector<PointSample>& samples, std::size_t j) {
  if (samples.empty()) throw ConfigError("cover bound check needs at least one sample");
  CoverBoundReport r;
  r.j = j;
  r.fold = samples.size();
  PointSample total = samples[0];
  FiniteIntSet idx = dyadic_cells(samples[0], j);
  for (std::size_t i = 1; i < samples.size(); ++i) {
    total = sample_sum(total, samples[i]);
    idx = sumset(idx, dyadic_cells(samples[i], j));
  }
  r.lhs = dyadic_count(total, j, r.fold);
  r.index_sumset = static_cast<unsigned long>(idx.size());
  r.holds_stated = r.lhs <= r.index_sumset * static_cast<unsigned long>(r.fold + 1);
  r.holds_certified = r.lhs <= r.index_sumset * static_cast<unsigned long>(2 * r.fold - 1);
  return r;
}

FiniteIntSet random_int_set(std::mt19937_64& rng, std::size_t max_size) {
  std::uniform_int_distribution<std::size_t> size_d(1, max_size);
  const std::size_t n = size_d(rng);
  // mix dense, sparse and wide ranges
  const long ranges[] = {static_cast<long>(2 * n), static_cast<long>(8 * n), 1L << 16};
  std::uniform_int_distribution<int> pick(0, 2);
  std::uniform_int_distribution<long> val(0, ranges[pick(rng)] - 1);
  std::vector<long> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(val(rng));
  return FiniteIntSet::from_ints(v);
}

PointSample random_point_sample(std::mt19937_64& rng, std::size_t max_size, std::size_t grid_bits) {
  std::uniform_int_distribution<std::size_t> size_d(1, max_size);
  const std::size_t n = size_d(rng);
  std::uniform_int_distribution<unsigned long> val(0, (1UL << grid_bits) - 1);
  std::vector<BigInt> nums;
  for (std::size_t i = 0; i < n; ++i) nums.emplace_back(val(rng));
  return PointSample::from_integers(std::move(nums), pow2(grid_bits));
}

namespace {

nlohmann::json sample_json(const PointSample& s) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& p : s.points()) a.push_back(to_string(p));
  return a;
}

}  // namespace

SuiteSummary run_random_suite(std::uint64_t seed, std::size_t pairs, std::size_t samples, std::size_t j_max) {
  SuiteSummary s;
  s.seed = seed;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < pairs; ++i) {
    const std::size_t l = 2 + i % 2;
    auto e = random_int_set(rng, 64);
    auto f = random_int_set(rng, 64);
    auto r = ruzsa_check(e, f, l);
    ++s.ruzsa_cases;
    if (!r.holds && ++s.ruzsa_failures == 1) s.first_failures["ruzsa"] = {{"case", i}, {"fold", l}};
  }
  std::uniform_int_distribution<std::size_t> jd(1, j_max);
  for (std::size_t i = 0; i < samples; ++i) {
    const std::size_t l = 2 + i % 2;
    std::vector<PointSample> parts;
    for (std::size_t t = 0; t < l; ++t) parts.push_back(random_point_sample(rng, 64));
    const std::size_t j = jd(rng);
    auto c = sumset_cover_bound_check(parts, j);
    ++s.cover_cases;
    if (!c.holds_stated && ++s.cover_failures_stated == 1) {
      nlohmann::json ps = nlohmann::json::array();
      for (const auto& p : parts) ps.push_back(sample_json(p));
      s.first_failures["cover_stated"] = {{"case", i}, {"fold", l}, {"j", j}, {"lhs", to_string(c.lhs)},
                                          {"index_sumset", to_string(c.index_sumset)}, {"samples", ps}};
    }
    if (!c.holds_certified && ++s.cover_failures_certified == 1)
      s.first_failures["cover_certified"] = {{"case", i}, {"fold", l}, {"j", j}};

    auto a = random_point_sample(rng, 64);
    auto b = random_point_sample(rng, 64);
    auto p = prop31_check(a, b, l, 1, j_max);
    ++s.prop31_cases;
    if (!p.all_stated && ++s.prop31_failures_stated == 1) {
      std::size_t bad = 0;
      for (const auto& sc : p.scales)
        if (!sc.holds_stated) {
          bad = sc.j;
          break;
        }
      s.first_failures["prop31_stated"] = {{"case", i}, {"fold", l}, {"j", bad}};
    }
    if (!p.all_certified && ++s.prop31_failures_certified == 1)
      s.first_failures["prop31_certified"] = {{"case", i}, {"fold", l}};
  }
  return s;
}

nlohmann::json to_json(const Prop31Report& r) {
  nlohmann::json scales = nlohmann::json::array();
  for (const auto& s : r.scales)
    scales.push_back({{"j", s.j},
                      {"lhs", to_string(s.lhs)},
                      {"d1_a", to_string(s.d1_a)},
                      {"d2_ab", to_string(s.d2_ab)},
                      {"holds_stated", s.holds_stated},
                      {"holds_certified", s.holds_certified},
                      {"exponent_lhs", s.exponent_lhs},
                      {"exponent_a", s.exponent_a},
                      {"exponent_ab", s.exponent_ab},
                      {"implied_bound", s.implied_bound}});
  return {{"fold", r.fold},
          {"all_stated", r.all_stated},
          {"all_certified", r.all_certified},
          {"argmin_ab", r.argmin_ab},
          {"implied_at_argmin", r.implied_at_argmin},
          {"scales", scales}};
}

nlohmann::json to_json(const SuiteSummary& s) {
  return {{"seed", s.seed},
          {"ruzsa", {{"cases", s.ruzsa_cases}, {"failures", s.ruzsa_failures}}},
          {"cover_bound",
           {{"cases", s.cover_cases},
            {"failures_stated", s.cover_failures_stated},
            {"failures_certified", s.cover_failures_certified}}},
          {"prop31",
           {{"cases", s.prop31_cases},
            {"failures_stated", s.prop31_failures_stated},
            {"failures_certified", s.prop31_failures_certified}}},
          {"first_failures", s.first_failures}};
}

}  // namespace sumlab
