#include "rsband/io.hpp"

#include <fstream>

#include "rsband/error.hpp"

namespace rsband {

namespace {

[[noreturn]] void violation(const std::string& pointer, const std::string& what) {
  throw model_error("SchemaViolation", (pointer.empty() ? "/" : pointer) + ": " + what);
}

const Json& field(const Json& j, const std::string& pointer, const char* key) {
  if (!j.is_object()) violation(pointer, "expected an object");
  if (!j.contains(key)) violation(pointer + "/" + key, "missing field");
  return j.at(key);
}

int integer(const Json& j, const std::string& pointer) {
  if (!j.is_number_integer()) violation(pointer, "expected an integer");
  return j.get<int>();
}

double number(const Json& j, const std::string& pointer) {
  if (!j.is_number()) violation(pointer, "expected a number");
  return j.get<double>();
}

const Json& array(const Json& j, const std::string& pointer) {
  if (!j.is_array()) violation(pointer, "expected an array");
  return j;
}

}  // namespace

Json to_json(Complex c) { return Json{{"re", c.real()}, {"im", c.imag()}}; }

Json to_json(const std::vector<Complex>& v) {
  Json out = Json::array();
  for (const auto& c : v) out.push_back(to_json(c));
  return out;
}

Complex complex_from_json(const Json& j, const std::string& pointer) {
  if (j.is_number()) return j.get<double>();
  const double re = number(field(j, pointer, "re"), pointer + "/re");
  const double im = j.contains("im") ? number(j.at("im"), pointer + "/im") : 0.0;
  return {re, im};
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw model_error("ParseError", "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw model_error("ParseError", path.string() + ": " + e.what());
  }
}

ParsedModel parse_model(const Json& j) {
  const std::string type = [&] {
    const Json& t = field(j, "", "type");
    if (!t.is_string()) violation("/type", "expected a string");
    return t.get<std::string>();
  }();

  if (type == "hamiltonian") {
    const int r = integer(field(j, "", "r"), "/r");
    const int p = integer(field(j, "", "p"), "/p");
    const int q = integer(field(j, "", "q"), "/q");
    if (r < 1) violation("/r", "must be >= 1");
    if (p < 0) violation("/p", "must be >= 0");
    if (q < 0) violation("/q", "must be >= 0");
    if (p + q < 1) violation("/q", "p + q must be >= 1");
    const Json& hops = array(field(j, "", "hoppings"), "/hoppings");
    std::vector<Hopping> list;
    bool left = false;
    bool right = false;
    for (std::size_t k = 0; k < hops.size(); ++k) {
      const std::string ptr = "/hoppings/" + std::to_string(k);
      const Json& h = hops[k];
      Hopping hop;
      hop.m = integer(field(h, ptr, "m"), ptr + "/m");
      hop.n = integer(field(h, ptr, "n"), ptr + "/n");
      hop.s = integer(field(h, ptr, "s"), ptr + "/s");
      if (hop.m < 1 || hop.m > r) violation(ptr + "/m", "band index outside 1..r");
      if (hop.n < 1 || hop.n > r) violation(ptr + "/n", "band index outside 1..r");
      if (hop.s < -p || hop.s > q) violation(ptr + "/s", "cell offset outside -p..q");
      const double re = number(field(h, ptr, "re"), ptr + "/re");
      const double im = h.contains("im") ? number(h.at("im"), ptr + "/im") : 0.0;
      hop.t = {re, im};
      if (hop.t != Complex{}) {
        left = left || hop.s == -p;
        right = right || hop.s == q;
      }
      list.push_back(hop);
    }
    if (!left) violation("/p", "no nonzero hopping at s = -p");
    if (!right) violation("/q", "no nonzero hopping at s = q");
    BlochHamiltonian h(r, p, q, list);
    return {h, char_poly(h)};
  }

  if (type == "bipoly") {
    const int r = integer(field(j, "", "r"), "/r");
    const int u = integer(field(j, "", "u"), "/u");
    if (r < 1) violation("/r", "must be >= 1");
    if (u < 1) violation("/u", "must be >= 1");
    const Json& rows = array(field(j, "", "coeffs"), "/coeffs");
    if (rows.size() != static_cast<std::size_t>(r + 1)) violation("/coeffs", "expected r + 1 rows");
    Eigen::MatrixXcd c(r + 1, u + 1);
    for (int i = 0; i <= r; ++i) {
      const std::string rp = "/coeffs/" + std::to_string(i);
      const Json& row = array(rows[i], rp);
      if (row.size() != static_cast<std::size_t>(u + 1)) violation(rp, "expected u + 1 entries");
      for (int k = 0; k <= u; ++k) c(i, k) = complex_from_json(row[k], rp + "/" + std::to_string(k));
    }
    const int shift = j.contains("z_shift") ? integer(j.at("z_shift"), "/z_shift") : 0;
    BiPoly f(c, shift);
    if (f.degree(Var::omega) != r) violation("/r", "omega-degree of coeffs is " + std::to_string(f.degree(Var::omega)));
    if (f.degree(Var::z) != u) violation("/u", "z-degree of coeffs is " + std::to_string(f.degree(Var::z)));
    return {std::nullopt, f};
  }

  violation("/type", "expected \"hamiltonian\" or \"bipoly\"");
}

ParsedModel load_model(const std::filesystem::path& path) { return parse_model(read_json(path)); }

Json serialize(const BlochHamiltonian& h) {
  Json hops = Json::array();
  for (const auto& x : h.hoppings())
    hops.push_back({{"m", x.m}, {"n", x.n}, {"s", x.s}, {"re", x.t.real()}, {"im", x.t.imag()}});
  return Json{{"type", "hamiltonian"}, {"r", h.bands()}, {"p", h.right_range()}, {"q", h.left_range()},
              {"hoppings", hops}};
}

Json serialize(const BiPoly& f) {
  Json rows = Json::array();
  for (int i = 0; i <= f.omega_degree(); ++i) {
    Json row = Json::array();
    for (int k = 0; k <= f.z_degree(); ++k) row.push_back(to_json(f.coeff(i, k)));
    rows.push_back(row);
  }
  Json out{{"type", "bipoly"}, {"r", f.degree(Var::omega)}, {"u", f.degree(Var::z)}, {"coeffs", rows}};
  if (f.z_shift() != 0) out["z_shift"] = f.z_shift();
  return out;
}

Json serialize(const ParsedModel& m) { return m.hamiltonian ? serialize(*m.hamiltonian) : serialize(m.f); }

TwoBandCoefficients parse_coefficients(const Json& j) {
  TwoBandCoefficients c;
  const Json& a = array(field(j, "", "A"), "/A");
  const Json& b = array(field(j, "", "B"), "/B");
  if (a.size() != 3) violation("/A", "expected [A0, A1, A2]");
  if (b.size() != 4) violation("/B", "expected [B0, B1, B2, B3]");
  for (int s = 0; s < 3; ++s) c.A[s] = complex_from_json(a[s], "/A/" + std::to_string(s));
  for (int s = 0; s < 4; ++s) c.B[s] = complex_from_json(b[s], "/B/" + std::to_string(s));
  return c;
}

Json serialize(const TwoBandCoefficients& c) {
  Json a = Json::array();
  Json b = Json::array();
  for (const auto& x : c.A) a.push_back(to_json(x));
  for (const auto& x : c.B) b.push_back(to_json(x));
  return Json{{"A", a}, {"B", b}};
}

DesignTarget parse_targets(const Json& j) {
  DesignTarget t;
  const Json& list = array(field(j, "", "targets"), "/targets");
  if (list.size() != 6) violation("/targets", "expected six branch point targets");
  for (std::size_t k = 0; k < list.size(); ++k)
    t.targets.push_back(complex_from_json(list[k], "/targets/" + std::to_string(k)));
  if (j.contains("anchor")) t.anchor = complex_from_json(j.at("anchor"), "/anchor");
  if (t.anchor == Complex{}) violation("/anchor", "must be nonzero");
  return t;
}

}  // namespace rsband
