#include "scpsim/boolfn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "scpsim/parallel.hpp"

namespace scpsim {

namespace {

std::uint64_t table_size_checked(int m, int cap, const char* what) {
  if (m < 1) throw validation_error(std::string(what) + ": m must be positive");
  if (m > cap) {
    throw capacity_error(std::string(what) + ": m = " + std::to_string(m) + " exceeds the cap of " +
                         std::to_string(cap));
  }
  return std::uint64_t{1} << m;
}

// ceil(a / b) for positive doubles, returned as a sample count >= 1.
std::uint64_t ceil_samples(double value) {
  if (value < 1.0) return 1;
  return static_cast<std::uint64_t>(std::ceil(value));
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

// "key=value" -> value, or throws.
std::string expect_kv(const std::string& token, const std::string& key) {
  const std::string prefix = key + "=";
  if (token.rfind(prefix, 0) != 0) {
    throw validation_error("expected '" + key + "=<value>', got '" + token + "'");
  }
  return token.substr(prefix.size());
}

int parse_int(const std::string& text, const char* what) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw validation_error(std::string("invalid integer for ") + what + ": '" + text + "'");
  }
}

}  // namespace

std::string family_name(FunctionFamily family) {
  switch (family) {
    case FunctionFamily::Parity: return "parity";
    case FunctionFamily::InnerProduct: return "inner_product";
    case FunctionFamily::And: return "and";
    case FunctionFamily::Junta: return "junta";
    case FunctionFamily::TruthTable: return "truth_table";
    case FunctionFamily::SparsePoly: return "sparse_poly";
  }
  return "?";
}

void BooleanFunction::finish_construction() {
  if (m_ < 1) throw validation_error("BooleanFunction: m must be positive");
  if (m_ <= kExactTransformMaxBits) {
    auto table = std::make_shared<std::vector<std::uint8_t>>();
    const std::uint64_t size = std::uint64_t{1} << m_;
    table->resize(size);
    bool nonzero = false;
    for (std::uint64_t x = 0; x < size; ++x) {
      const int v = eval_(x);
      if (v != 0 && v != 1) {
        throw validation_error("BooleanFunction: evaluator returned a non-{0,1} value");
      }
      (*table)[x] = static_cast<std::uint8_t>(v);
      nonzero = nonzero || v == 1;
    }
    if (!nonzero) throw validation_error("BooleanFunction: the zero function is not a valid SCP");
    table_ = std::move(table);
    auto keep = table_;
    eval_ = [keep](std::uint64_t x) { return static_cast<int>((*keep)[x]); };
  }
}

BooleanFunction BooleanFunction::parity(int m) {
  BooleanFunction f;
  f.m_ = m;
  f.family_ = FunctionFamily::Parity;
  f.sparsity_bound_ = 2;
  f.eval_ = [](std::uint64_t x) { return hamming_weight(x) & 1; };
  f.finish_construction();
  return f;
}

BooleanFunction BooleanFunction::conjunction(int m) {
  BooleanFunction f;
  f.m_ = m;
  f.family_ = FunctionFamily::And;
  if (m >= 1 && m < 64) f.sparsity_bound_ = std::uint64_t{1} << m;
  const std::uint64_t all = (m >= 1 && m < 64) ? ((std::uint64_t{1} << m) - 1) : 0;
  f.eval_ = [all](std::uint64_t x) { return x == all ? 1 : 0; };
  f.finish_construction();
  return f;
}

BooleanFunction BooleanFunction::inner_product(int m, std::uint64_t s) {
  if (m < 1 || m > 63) throw validation_error("inner_product: m out of range");
  if (s == 0) throw validation_error("inner_product: s = 0^m is not allowed (f would be zero)");
  if (s >> m) throw validation_error("inner_product: s has bits outside the m-bit range");
  BooleanFunction f;
  f.m_ = m;
  f.family_ = FunctionFamily::InnerProduct;
  f.sparsity_bound_ = 2;
  f.ip_mask_ = s;
  f.eval_ = [s](std::uint64_t x) { return dot_mod2(s, x); };
  f.finish_construction();
  return f;
}

BooleanFunction BooleanFunction::junta(int m, std::vector<int> vars,
                                       std::vector<std::uint8_t> core_table) {
  const int k = static_cast<int>(vars.size());
  if (k < 1 || k > 20) throw validation_error("junta: need between 1 and 20 active variables");
  if (m < 1 || m > 63) throw validation_error("junta: m out of range");
  for (int v : vars) {
    if (v < 0 || v >= m) throw validation_error("junta: variable index out of range");
  }
  std::vector<int> sorted = vars;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw validation_error("junta: duplicate variable index");
  }
  if (core_table.size() != (std::size_t{1} << k)) {
    throw validation_error("junta: core table must have 2^k entries");
  }
  BooleanFunction f;
  f.m_ = m;
  f.family_ = FunctionFamily::Junta;
  f.sparsity_bound_ = std::uint64_t{1} << k;
  f.junta_vars_ = vars;
  f.junta_table_ = core_table;
  const auto vars_copy = vars;
  const auto table_copy = core_table;
  const int mm = m;
  f.eval_ = [vars_copy, table_copy, mm](std::uint64_t x) {
    std::uint64_t core = 0;
    for (int v : vars_copy) core = (core << 1) | static_cast<std::uint64_t>(bit_of(x, v, mm));
    return static_cast<int>(table_copy[core]);
  };
  f.finish_construction();
  return f;
}

BooleanFunction BooleanFunction::truth_table(int m, std::vector<std::uint8_t> table) {
  const std::uint64_t size = table_size_checked(m, kExactTransformMaxBits, "truth_table");
  if (table.size() != size) throw validation_error("truth_table: table must have 2^m entries");
  BooleanFunction f;
  f.m_ = m;
  f.family_ = FunctionFamily::TruthTable;
  auto shared = std::make_shared<std::vector<std::uint8_t>>(std::move(table));
  f.eval_ = [shared](std::uint64_t x) { return static_cast<int>((*shared)[x]); };
  f.finish_construction();
  // Exact sparsity from the table; the bound is declared, and for an explicit
  // table the exact value is the natural declaration.
  const auto spectrum = wht_spectrum(f);
  f.sparsity_bound_ = spectrum.support_size();
  return f;
}

BooleanFunction BooleanFunction::sparse_poly(int m,
                                             std::vector<std::pair<std::uint64_t, double>> terms) {
  if (m < 1 || m > 63) throw validation_error("sparse_poly: m out of range");
  if (terms.empty()) throw validation_error("sparse_poly: at least one term required");
  for (const auto& [s, c] : terms) {
    (void)c;
    if (s >> m) throw validation_error("sparse_poly: term index outside the m-bit range");
  }
  BooleanFunction f;
  f.m_ = m;
  f.family_ = FunctionFamily::SparsePoly;
  f.sparsity_bound_ = terms.size();
  f.poly_terms_ = terms;
  const auto terms_copy = terms;
  f.eval_ = [terms_copy](std::uint64_t x) {
    double acc = 0.0;
    for (const auto& [s, c] : terms_copy) acc += c * parity_sign(s, x);
    const int rounded = acc >= 0.5 ? 1 : 0;
    if (std::abs(acc - rounded) > 1e-6) {
      throw validation_error("sparse_poly: expansion does not evaluate to {0,1}");
    }
    return rounded;
  };
  f.finish_construction();
  return f;
}

const std::vector<std::uint8_t>& BooleanFunction::table() const {
  if (!table_) throw capacity_error("BooleanFunction: no truth table materialized (m > 20)");
  return *table_;
}

int BooleanFunction::degree() const {
  if (has_truth_table()) return scpsim::degree(wht_spectrum(*this));
  switch (family_) {
    case FunctionFamily::Parity:
    case FunctionFamily::And:
      return m_;
    case FunctionFamily::InnerProduct:
      return hamming_weight(ip_mask_);
    case FunctionFamily::SparsePoly: {
      int d = 0;
      for (const auto& [s, c] : poly_terms_) {
        if (std::abs(c) > kSpectrumZeroCutoff) d = std::max(d, hamming_weight(s));
      }
      return d;
    }
    case FunctionFamily::Junta: {
      // Degree of the core lifted to the chosen variables.
      const auto core = BooleanFunction::truth_table(static_cast<int>(junta_vars_.size()),
                                                     junta_table_);
      return core.degree();
    }
    case FunctionFamily::TruthTable:
      break;
  }
  throw capacity_error("BooleanFunction: degree unavailable without a truth table");
}

bool BooleanFunction::operator==(const BooleanFunction& other) const {
  if (m_ != other.m_ || family_ != other.family_) return false;
  switch (family_) {
    case FunctionFamily::Parity:
    case FunctionFamily::And:
      return true;
    case FunctionFamily::InnerProduct:
      return ip_mask_ == other.ip_mask_;
    case FunctionFamily::Junta:
      return junta_vars_ == other.junta_vars_ && junta_table_ == other.junta_table_;
    case FunctionFamily::TruthTable:
      return *table_ == *other.table_;
    case FunctionFamily::SparsePoly:
      return poly_terms_ == other.poly_terms_;
  }
  return false;
}

BooleanFunction BooleanFunction::parse(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  auto next_content_line = [&](bool required) -> std::optional<std::string> {
    while (std::getline(in, line)) {
      ++line_no;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      if (line[first] == '#') continue;
      return line.substr(first);
    }
    if (required) {
      throw validation_error("function file: unexpected end of input at line " +
                             std::to_string(line_no));
    }
    return std::nullopt;
  };

  const auto header = next_content_line(true);
  const auto tokens = split_ws(*header);
  if (tokens.size() != 3 || tokens[0] != "fn") {
    throw validation_error("function file: header must be 'fn m=<int> family=<tag>' (line " +
                           std::to_string(line_no) + ")");
  }
  const int m = parse_int(expect_kv(tokens[1], "m"), "m");
  const std::string family = expect_kv(tokens[2], "family");

  if (family == "parity") return parity(m);
  if (family == "and") return conjunction(m);
  if (family == "inner_product") {
    const auto payload = next_content_line(true);
    const auto toks = split_ws(*payload);
    if (toks.size() != 1) throw validation_error("inner_product: expected a single 's=<bits>' line");
    const std::string bits = expect_kv(toks[0], "s");
    if (static_cast<int>(bits.size()) != m) {
      throw validation_error("inner_product: s must have exactly m bits");
    }
    return inner_product(m, parse_bit_string(bits));
  }
  if (family == "truth_table") {
    const auto payload = next_content_line(true);
    const auto toks = split_ws(*payload);
    if (toks.size() != 1) throw validation_error("truth_table: expected one line of 2^m bits");
    const std::string& bits = toks[0];
    std::vector<std::uint8_t> table;
    table.reserve(bits.size());
    for (char c : bits) {
      if (c != '0' && c != '1') throw validation_error("truth_table: entries must be 0/1");
      table.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return truth_table(m, std::move(table));
  }
  if (family == "junta") {
    const auto payload = next_content_line(true);
    const auto toks = split_ws(*payload);
    if (toks.size() != 2) throw validation_error("junta: expected 'vars=<list> table=<bits>'");
    std::vector<int> vars;
    {
      std::istringstream vs(expect_kv(toks[0], "vars"));
      std::string item;
      while (std::getline(vs, item, ',')) vars.push_back(parse_int(item, "junta variable"));
    }
    std::vector<std::uint8_t> table;
    for (char c : expect_kv(toks[1], "table")) {
      if (c != '0' && c != '1') throw validation_error("junta: table entries must be 0/1");
      table.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return junta(m, std::move(vars), std::move(table));
  }
  if (family == "sparse_poly") {
    std::vector<std::pair<std::uint64_t, double>> terms;
    while (auto payload = next_content_line(false)) {
      const auto toks = split_ws(*payload);
      if (toks.size() != 2) throw validation_error("sparse_poly: expected 's=<bits> coeff=<real>'");
      const std::string bits = expect_kv(toks[0], "s");
      if (static_cast<int>(bits.size()) != m) {
        throw validation_error("sparse_poly: s must have exactly m bits");
      }
      double coeff = 0.0;
      try {
        coeff = std::stod(expect_kv(toks[1], "coeff"));
      } catch (const std::exception&) {
        throw validation_error("sparse_poly: invalid coefficient");
      }
      terms.emplace_back(parse_bit_string(bits), coeff);
    }
    return sparse_poly(m, std::move(terms));
  }
  throw validation_error("function file: unknown family '" + family + "'");
}

std::string BooleanFunction::render() const {
  std::ostringstream out;
  out << "fn m=" << m_ << " family=" << family_name(family_) << "\n";
  switch (family_) {
    case FunctionFamily::Parity:
    case FunctionFamily::And:
      break;
    case FunctionFamily::InnerProduct:
      out << "s=" << to_bit_string(ip_mask_, m_) << "\n";
      break;
    case FunctionFamily::TruthTable: {
      for (std::uint8_t v : *table_) out << static_cast<int>(v);
      out << "\n";
      break;
    }
    case FunctionFamily::Junta: {
      out << "vars=";
      for (std::size_t i = 0; i < junta_vars_.size(); ++i) {
        if (i) out << ",";
        out << junta_vars_[i];
      }
      out << " table=";
      for (std::uint8_t v : junta_table_) out << static_cast<int>(v);
      out << "\n";
      break;
    }
    case FunctionFamily::SparsePoly: {
      char buf[64];
      for (const auto& [s, c] : poly_terms_) {
        std::snprintf(buf, sizeof(buf), "%.17g", c);
        out << "s=" << to_bit_string(s, m_) << " coeff=" << buf << "\n";
      }
      break;
    }
  }
  return out.str();
}

SignedFunction lift_to_signed(const BooleanFunction& f) {
  SignedFunction g;
  g.m = f.m();
  g.sparsity_bound = f.sparsity_bound() + 1;
  if (f.has_truth_table()) {
    auto table = std::make_shared<std::vector<std::int8_t>>();
    const auto& ft = f.table();
    table->resize(ft.size());
    for (std::size_t x = 0; x < ft.size(); ++x) {
      (*table)[x] = static_cast<std::int8_t>(1 - 2 * static_cast<int>(ft[x]));
    }
    g.table = table;
    g.eval = [table](std::uint64_t x) { return static_cast<int>((*table)[x]); };
  } else {
    const BooleanFunction copy = f;
    g.eval = [copy](std::uint64_t x) { return 1 - 2 * copy(x); };
  }
  return g;
}

double fourier_coefficient_exact(const std::function<double(std::uint64_t)>& f, int m,
                                 std::uint64_t s) {
  const std::uint64_t size = table_size_checked(m, kExactCoefficientMaxBits, "fourier_coefficient_exact");
  double acc = 0.0;
  for (std::uint64_t x = 0; x < size; ++x) acc += f(x) * parity_sign(s, x);
  return acc / static_cast<double>(size);
}

FourierSpectrum wht_spectrum(const std::vector<double>& values, int m) {
  const std::uint64_t size = table_size_checked(m, kExactTransformMaxBits, "wht_spectrum");
  if (values.size() != size) throw validation_error("wht_spectrum: need 2^m values");
  std::vector<double> work = values;
  for (std::uint64_t half = 1; half < size; half <<= 1) {
    for (std::uint64_t base = 0; base < size; base += half << 1) {
      for (std::uint64_t i = base; i < base + half; ++i) {
        const double a = work[i];
        const double b = work[i + half];
        work[i] = a + b;
        work[i + half] = a - b;
      }
    }
  }
  const double scale = 1.0 / static_cast<double>(size);
  std::map<std::uint64_t, double> coeffs;
  for (std::uint64_t s = 0; s < size; ++s) {
    const double c = work[s] * scale;
    if (std::abs(c) >= kSpectrumZeroCutoff) coeffs.emplace(s, c);
  }
  return FourierSpectrum(m, std::move(coeffs));
}

FourierSpectrum wht_spectrum(const BooleanFunction& f) {
  const auto& table = f.table();
  std::vector<double> values(table.begin(), table.end());
  return wht_spectrum(values, f.m());
}

FourierSpectrum wht_spectrum(const SignedFunction& g) {
  if (g.has_truth_table()) {
    std::vector<double> values(g.table->begin(), g.table->end());
    return wht_spectrum(values, g.m);
  }
  const std::uint64_t size = table_size_checked(g.m, kExactTransformMaxBits, "wht_spectrum");
  std::vector<double> values(size);
  for (std::uint64_t x = 0; x < size; ++x) values[x] = g.eval(x);
  return wht_spectrum(values, g.m);
}

int degree(const FourierSpectrum& spectrum) {
  if (spectrum.coeffs().empty()) {
    throw validation_error("degree: empty spectrum (zero function)");
  }
  int d = 0;
  for (const auto& [s, c] : spectrum.coeffs()) {
    (void)c;
    d = std::max(d, hamming_weight(s));
  }
  return d;
}

BooleanFunction make_inner_product_function(int m, std::uint64_t s) {
  return BooleanFunction::inner_product(m, s);
}

CoefficientEstimate estimate_fourier_coefficient_detail(const SignedFunction& g, std::uint64_t s,
                                                        double accuracy, double delta,
                                                        std::uint64_t seed) {
  if (!(accuracy > 0.0 && accuracy <= 1.0)) {
    throw validation_error("estimate_fourier_coefficient: accuracy must lie in (0, 1]");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw validation_error("estimate_fourier_coefficient: delta must lie in (0, 1)");
  }
  const std::uint64_t k = ceil_samples(4.0 * std::log(2.0 / delta) / (accuracy * accuracy));
  RandomStream stream = RandomStream::root(seed).derive("fourier-coefficient").derive(s);
  double acc = 0.0;
  for (std::uint64_t i = 0; i < k; ++i) {
    const std::uint64_t x = stream.next_bits(g.m);
    acc += g.eval(x) * parity_sign(s, x);
  }
  return {acc / static_cast<double>(k), k};
}

double estimate_fourier_coefficient(const SignedFunction& g, std::uint64_t s, double accuracy,
                                    double delta, std::uint64_t seed) {
  return estimate_fourier_coefficient_detail(g, s, accuracy, delta, seed).value;
}

namespace {

// Monte-Carlo bucket weight W(rho) = sum over suffixes z of g^(rho z)^2 via
// W(rho) = E[g(x1 y) g(x2 y) (-1)^(rho.(x1 xor x2))] with x1, x2 uniform over
// the prefix bits and y uniform over the suffix bits.
double estimate_bucket_weight(const SignedFunction& g, std::uint64_t prefix, int prefix_len,
                              std::uint64_t samples, RandomStream stream) {
  const int suffix_len = g.m - prefix_len;
  double acc = 0.0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    const std::uint64_t x1 = stream.next_bits(prefix_len);
    const std::uint64_t x2 = stream.next_bits(prefix_len);
    const std::uint64_t y = stream.next_bits(suffix_len);
    const int sign = (std::popcount(prefix & (x1 ^ x2)) & 1) ? -1 : 1;
    acc += sign * g.eval((x1 << suffix_len) | y) * g.eval((x2 << suffix_len) | y);
  }
  return acc / static_cast<double>(samples);
}

}  // namespace

std::vector<std::uint64_t> km_significant_set(const SignedFunction& g, const KMParams& params,
                                              std::uint64_t seed) {
  if (params.theta < 1.0) throw validation_error("km_significant_set: theta must be >= 1");
  if (!(params.delta > 0.0 && params.delta < 0.5)) {
    throw validation_error("km_significant_set: delta must lie in (0, 1/2)");
  }
  const double theta = params.theta;
  const double keep_threshold = 3.0 / (4.0 * theta);

  if (params.allow_exact_shortcut && g.has_truth_table()) {
    const auto spectrum = wht_spectrum(g);
    std::vector<std::uint64_t> out;
    for (const auto& [s, c] : spectrum.coeffs()) {
      if (std::abs(c) >= keep_threshold) out.push_back(s);
    }
    return out;
  }

  const int m = g.m;
  const double theta2 = theta * theta;
  const std::uint64_t weight_samples =
      params.sample_budget > 0
          ? params.sample_budget
          : ceil_samples(64.0 * theta2 * theta2 * std::log(8.0 * m * theta2 / params.delta));
  const double weight_cut = 1.0 / (8.0 * theta2);
  const std::size_t frontier_cap = static_cast<std::size_t>(64.0 * theta2);

  const RandomStream root = RandomStream::root(seed).derive("km");
  std::vector<std::uint64_t> frontier{0};
  for (int level = 1; level <= m; ++level) {
    std::vector<std::uint64_t> children;
    children.reserve(frontier.size() * 2);
    for (std::uint64_t prefix : frontier) {
      children.push_back(prefix << 1);
      children.push_back((prefix << 1) | 1);
    }
    std::vector<char> keep(children.size(), 0);
    parallel_for(children.size(), [&](std::size_t i) {
      const auto stream = root.derive("weight").derive(static_cast<std::uint64_t>(level))
                              .derive(children[i]);
      const double w = estimate_bucket_weight(g, children[i], level, weight_samples, stream);
      keep[i] = w > weight_cut ? 1 : 0;
    });
    std::vector<std::uint64_t> next;
    for (std::size_t i = 0; i < children.size(); ++i) {
      if (keep[i]) next.push_back(children[i]);
    }
    if (next.size() > frontier_cap) {
      throw capacity_error("km_significant_set: live-prefix frontier exceeded 64 theta^2 (" +
                           std::to_string(next.size()) + " prefixes at level " +
                           std::to_string(level) + "); the sparsity promise looks violated");
    }
    frontier = std::move(next);
    if (frontier.empty()) break;
  }

  if (frontier.empty()) return {};

  // Final per-coefficient filter at threshold 3/(4 theta). Accuracy 1/(8 theta)
  // leaves room on both sides of the (1/(2 theta), 1/theta) gap.
  const double filter_accuracy = 1.0 / (8.0 * theta);
  const double filter_delta = params.delta / (2.0 * static_cast<double>(frontier.size()));
  std::uint64_t filter_samples =
      ceil_samples(4.0 * std::log(2.0 / filter_delta) / (filter_accuracy * filter_accuracy));
  if (params.sample_budget > 0) filter_samples = std::min(filter_samples, params.sample_budget);

  std::vector<char> keep(frontier.size(), 0);
  parallel_for(frontier.size(), [&](std::size_t i) {
    RandomStream stream = root.derive("filter").derive(frontier[i]);
    double acc = 0.0;
    for (std::uint64_t t = 0; t < filter_samples; ++t) {
      const std::uint64_t x = stream.next_bits(m);
      acc += g.eval(x) * parity_sign(frontier[i], x);
    }
    keep[i] = std::abs(acc / static_cast<double>(filter_samples)) >= keep_threshold ? 1 : 0;
  });

  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < frontier.size(); ++i) {
    if (keep[i]) out.push_back(frontier[i]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace scpsim
