#pragma once
// Exact text serialization for the kernel polynomials.
//
// A kernel file is line-oriented structured text holding either the
// reproducing kernel Z_k(u,v) (a polynomial) or the fundamental-solution
// layer for E_k (a polynomial numerator over an explicit power of |x|).
// Every coefficient is written as an exact rational "p/q", so
// load(save(K)) == K holds bit for bit.
//
// Layout:
//   rsc-kernel 1
//   n <int>
//   k <int>
//   normalization omega_n
//   kind Zk|Ek
//   terms <count>
//   term u <csv> v <csv> [x <csv> denom <int>] blade <mask> coeff <p/q>
//   ...
//   end
//
// Exponent CSVs carry exactly n entries.  The x/denom fields appear only
// for kind Ek.  Terms are written in a canonical order (monomial order,
// then blade order), and load preserves file order, so a rewritten file
// is byte-identical.

#include <cctype>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rsc/monogenic.hpp"
#include "rsc/rarita.hpp"

namespace rsc {

struct KernelTerm {
  std::vector<unsigned> u_exp, v_exp;
  std::vector<unsigned> x_exp;  // empty for Zk
  int denom_m = 0;              // Ek: this term sits over |x|^denom_m
  Blade blade = 0;
  Rational coeff;

  bool operator==(const KernelTerm& o) const {
    return u_exp == o.u_exp && v_exp == o.v_exp && x_exp == o.x_exp &&
           denom_m == o.denom_m && blade == o.blade && coeff == o.coeff;
  }
};

struct KernelFile {
  int n = 0, k = 0;
  std::string normalization = "omega_n";
  std::string kind;  // "Zk" or "Ek"
  std::vector<KernelTerm> terms;

  bool operator==(const KernelFile& o) const {
    return n == o.n && k == o.k && normalization == o.normalization &&
           kind == o.kind && terms == o.terms;
  }
};

namespace kernel_io_detail {

inline std::string rational_str(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline Rational parse_rational(const std::string& s) {
  if (s.find('/') == std::string::npos)
    throw std::runtime_error("kernel file: coefficient lacks '/': " + s);
  Rational q;
  if (mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0)
    throw std::runtime_error("kernel file: bad rational: " + s);
  q.canonicalize();
  return q;
}

inline std::string exps_str(const std::vector<unsigned>& e) {
  std::string s;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(e[i]);
  }
  return s;
}

inline std::vector<unsigned> parse_exps(const std::string& s, int n) {
  std::vector<unsigned> out;
  std::stringstream ss(s);
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    if (piece.empty() || piece.find_first_not_of("0123456789") != std::string::npos)
      throw std::runtime_error("kernel file: bad exponent list: " + s);
    out.push_back((unsigned)std::stoul(piece));
  }
  if ((int)out.size() != n)
    throw std::runtime_error("kernel file: exponent list needs " +
                             std::to_string(n) + " entries: " + s);
  return out;
}

inline std::vector<unsigned> space_exps(const Monomial& m, Space sp, int n) {
  std::vector<unsigned> e((std::size_t)n);
  for (int i = 0; i < n; ++i) e[(std::size_t)i] = m.get(sp, i);
  return e;
}

// Short human-readable note on a nonzero polynomial, for error messages.
inline std::string poly_note(const MPoly<Rational>& p) {
  if (p.is_zero()) return "0";
  const auto& [m, c] = *p.terms().begin();
  std::string s = std::to_string(p.terms().size()) + " term(s); first: coeff ";
  const auto& [b, val] = *c.terms().begin();
  s += rational_str(val) + " blade " + std::to_string((unsigned long)b) +
       " exps";
  for (int sp = 0; sp < 6; ++sp)
    for (int i = 0; i < kMaxPolyDim; ++i)
      if (unsigned e = m.get((Space)sp, i))
        s += std::string(" ") + space_name((Space)sp) + std::to_string(i + 1) +
             "^" + std::to_string(e);
  return s;
}

inline void check_header(const KernelFile& f) {
  if (f.n < 3 || f.n > kMaxPolyDim)
    throw std::runtime_error("kernel file: n out of range");
  if (f.k < 0) throw std::runtime_error("kernel file: negative k");
  if (f.normalization != "omega_n")
    throw std::runtime_error("kernel file: unknown normalization '" +
                             f.normalization + "'");
  if (f.kind != "Zk" && f.kind != "Ek")
    throw std::runtime_error("kernel file: unknown kind '" + f.kind + "'");
}

// Flatten one polynomial's terms in canonical (monomial, blade) order.
template <class Fn>
void emit_terms(const MPoly<Rational>& p, Fn&& fn) {
  for (const auto& [m, c] : p.terms())
    for (const auto& [b, s] : c.terms()) fn(m, b, s);
}

}  // namespace kernel_io_detail

inline KernelFile kernel_file_from_Zk(const KernelZk<Rational>& Z) {
  namespace kd = kernel_io_detail;
  KernelFile f;
  f.n = Z.n;
  f.k = Z.k;
  f.kind = "Zk";
  kd::emit_terms(Z.poly, [&](const Monomial& m, Blade b, const Rational& s) {
    KernelTerm t;
    t.u_exp = kd::space_exps(m, Space::u, Z.n);
    t.v_exp = kd::space_exps(m, Space::v, Z.n);
    t.blade = b;
    t.coeff = s;
    f.terms.push_back(std::move(t));
  });
  return f;
}

inline KernelFile kernel_file_from_Ek(const KernelEk<Rational>& E) {
  namespace kd = kernel_io_detail;
  KernelFile f;
  f.n = E.n;
  f.k = E.k;
  f.kind = "Ek";
  kd::emit_terms(E.F.num(), [&](const Monomial& m, Blade b, const Rational& s) {
    KernelTerm t;
    t.u_exp = kd::space_exps(m, Space::u, E.n);
    t.v_exp = kd::space_exps(m, Space::v, E.n);
    t.x_exp = kd::space_exps(m, Space::x, E.n);
    t.denom_m = E.F.spow();
    t.blade = b;
    t.coeff = s;
    f.terms.push_back(std::move(t));
  });
  return f;
}

inline KernelZk<Rational> to_Zk(const KernelFile& f) {
  kernel_io_detail::check_header(f);
  if (f.kind != "Zk") throw std::runtime_error("kernel file: not a Zk file");
  MPoly<Rational> p(f.n);
  for (const auto& t : f.terms) {
    if ((int)t.u_exp.size() != f.n || (int)t.v_exp.size() != f.n)
      throw std::runtime_error("kernel file: term exponent arity mismatch");
    if (!t.x_exp.empty())
      throw std::runtime_error("kernel file: Zk term carries x exponents");
    if (t.blade >= (Blade{1} << f.n))
      throw std::runtime_error("kernel file: blade outside algebra");
    Monomial m;
    for (int i = 0; i < f.n; ++i) {
      m.set(Space::u, i, t.u_exp[(std::size_t)i]);
      m.set(Space::v, i, t.v_exp[(std::size_t)i]);
    }
    p += MPoly<Rational>::monomial(
        f.n, m, Multivector<Rational>::blade(f.n, t.blade, t.coeff));
  }
  return {f.n, f.k, std::move(p)};
}

inline KernelEk<Rational> to_Ek(const KernelFile& f) {
  kernel_io_detail::check_header(f);
  if (f.kind != "Ek") throw std::runtime_error("kernel file: not an Ek file");
  MPoly<Rational> num(f.n);
  int denom = f.terms.empty() ? f.n + 2 * f.k : f.terms.front().denom_m;
  for (const auto& t : f.terms) {
    if ((int)t.u_exp.size() != f.n || (int)t.v_exp.size() != f.n ||
        (int)t.x_exp.size() != f.n)
      throw std::runtime_error("kernel file: term exponent arity mismatch");
    if (t.denom_m != denom)
      throw std::runtime_error(
          "kernel file: mixed |x| powers are not supported");
    if (t.blade >= (Blade{1} << f.n))
      throw std::runtime_error("kernel file: blade outside algebra");
    Monomial m;
    for (int i = 0; i < f.n; ++i) {
      m.set(Space::u, i, t.u_exp[(std::size_t)i]);
      m.set(Space::v, i, t.v_exp[(std::size_t)i]);
      m.set(Space::x, i, t.x_exp[(std::size_t)i]);
    }
    num += MPoly<Rational>::monomial(
        f.n, m, Multivector<Rational>::blade(f.n, t.blade, t.coeff));
  }
  return {f.n, f.k, RadialRational<Rational>(std::move(num), denom, Space::x),
          rs_ck(f.n, f.k)};
}

inline void save_kernel(const KernelFile& f, std::ostream& os) {
  namespace kd = kernel_io_detail;
  kd::check_header(f);
  os << "rsc-kernel 1\n";
  os << "n " << f.n << "\n";
  os << "k " << f.k << "\n";
  os << "normalization " << f.normalization << "\n";
  os << "kind " << f.kind << "\n";
  os << "terms " << f.terms.size() << "\n";
  for (const auto& t : f.terms) {
    os << "term u " << kd::exps_str(t.u_exp) << " v " << kd::exps_str(t.v_exp);
    if (f.kind == "Ek")
      os << " x " << kd::exps_str(t.x_exp) << " denom " << t.denom_m;
    os << " blade " << t.blade << " coeff " << kd::rational_str(t.coeff)
       << "\n";
  }
  os << "end\n";
  if (!os) throw std::runtime_error("kernel file: write failed");
}

inline void save_kernel(const KernelFile& f, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  save_kernel(f, os);
  os.flush();
  if (!os) throw std::runtime_error("kernel file: write failed: " + path);
}

inline KernelFile load_kernel(std::istream& is) {
  namespace kd = kernel_io_detail;
  KernelFile f;
  std::string line;
  auto next = [&](const char* what) {
    if (!std::getline(is, line))
      throw std::runtime_error(std::string("kernel file: truncated before ") +
                               what);
    return std::stringstream(line);
  };
  auto expect_key = [&](std::stringstream& ss, const std::string& key) {
    std::string got;
    ss >> got;
    if (got != key)
      throw std::runtime_error("kernel file: expected '" + key + "', got '" +
                               got + "'");
  };

  {
    auto ss = next("magic");
    expect_key(ss, "rsc-kernel");
    int version = 0;
    ss >> version;
    if (version != 1)
      throw std::runtime_error("kernel file: unsupported version");
  }
  {
    auto ss = next("n");
    expect_key(ss, "n");
    if (!(ss >> f.n)) throw std::runtime_error("kernel file: bad n line");
  }
  {
    auto ss = next("k");
    expect_key(ss, "k");
    if (!(ss >> f.k)) throw std::runtime_error("kernel file: bad k line");
  }
  {
    auto ss = next("normalization");
    expect_key(ss, "normalization");
    if (!(ss >> f.normalization))
      throw std::runtime_error("kernel file: bad normalization line");
  }
  {
    auto ss = next("kind");
    expect_key(ss, "kind");
    if (!(ss >> f.kind)) throw std::runtime_error("kernel file: bad kind line");
  }
  kd::check_header(f);

  std::size_t count = 0;
  {
    auto ss = next("terms");
    expect_key(ss, "terms");
    if (!(ss >> count))
      throw std::runtime_error("kernel file: bad terms line");
  }
  f.terms.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto ss = next("term");
    expect_key(ss, "term");
    KernelTerm t;
    std::string key, val;
    expect_key(ss, "u");
    ss >> val;
    t.u_exp = kd::parse_exps(val, f.n);
    expect_key(ss, "v");
    ss >> val;
    t.v_exp = kd::parse_exps(val, f.n);
    if (f.kind == "Ek") {
      expect_key(ss, "x");
      ss >> val;
      t.x_exp = kd::parse_exps(val, f.n);
      expect_key(ss, "denom");
      if (!(ss >> t.denom_m))
        throw std::runtime_error("kernel file: bad denom field");
    }
    expect_key(ss, "blade");
    unsigned long blade = 0;
    if (!(ss >> blade))
      throw std::runtime_error("kernel file: bad blade field");
    t.blade = (Blade)blade;
    expect_key(ss, "coeff");
    if (!(ss >> val))
      throw std::runtime_error("kernel file: bad coeff field");
    t.coeff = kd::parse_rational(val);
    if (ss >> key)
      throw std::runtime_error("kernel file: trailing tokens on term line");
    f.terms.push_back(std::move(t));
  }
  {
    auto ss = next("end");
    expect_key(ss, "end");
  }
  return f;
}

inline KernelFile load_kernel(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open kernel file: " + path);
  return load_kernel(is);
}

// Build the requested kernel, prove it behaves (exact reproduction for Zk,
// exact two-sided annihilation for Ek), and only then write the file.  A
// validation failure throws with the offending residual and leaves the
// target path untouched.
inline KernelFile gen_kernel(int n, int k, const std::string& kind,
                             const std::string& path) {
  std::string norm = kind;
  for (auto& c : norm) c = (char)std::tolower((unsigned char)c);
  if (norm != "zk" && norm != "ek")
    throw std::invalid_argument("gen_kernel: kind must be zk or ek");

  KernelZk<Rational> Z = build_Zk<Rational>(n, k);
  KernelFile f;
  if (norm == "zk") {
    for (const auto& sigma : enumerate_sigma(n, k)) {
      MPoly<Rational> P = basis_element<Rational>(n, sigma, Space::u);
      MPoly<Rational> R = reproduce(Z, P, Space::u);
      if (!(R - P).is_zero())
        throw std::runtime_error(
            "gen_kernel: reproduction residual is nonzero: " +
            kernel_io_detail::poly_note(R - P));
    }
    f = kernel_file_from_Zk(Z);
  } else {
    KernelEk<Rational> E = build_Ek<Rational>(n, k, Z);
    RadialRational<Rational> left = left_annihilation_check(E);
    if (!left.num().is_zero())
      throw std::runtime_error(
          "gen_kernel: left annihilation residual is nonzero: " +
          kernel_io_detail::poly_note(left.num()));
    RadialRational<Rational> right = right_annihilation_check(E);
    if (!right.num().is_zero())
      throw std::runtime_error(
          "gen_kernel: right annihilation residual is nonzero: " +
          kernel_io_detail::poly_note(right.num()));
    f = kernel_file_from_Ek(E);
  }
  if (!path.empty()) save_kernel(f, path);
  return f;
}

}  // namespace rsc
