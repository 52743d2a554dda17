#include "rjug/oracle.hpp"

#include <algorithm>
#include <cstdint>

namespace rjug {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// ---------------------------------------------------------------- mod p ----

constexpr u64 kMersenne61 = (1ULL << 61) - 1;

struct Fp {
  u64 p;
  bool m61;

  explicit Fp(u64 prime) : p(prime), m61(prime == kMersenne61) {}

  u64 mul(u64 a, u64 b) const {
    if (m61) {
      u128 t = static_cast<u128>(a) * b;
      u64 lo = static_cast<u64>(t) & kMersenne61;
      u64 hi = static_cast<u64>(t >> 61);
      u64 r = lo + hi;
      if (r >= p) r -= p;
      return r;
    }
    return static_cast<u64>(static_cast<u128>(a) * b % p);
  }

  u64 add(u64 a, u64 b) const {
    u64 r = a + b;
    if (r >= p) r -= p;
    return r;
  }

  u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + p - b; }

  u64 pow(u64 base, u64 e) const {
    u64 r = 1;
    while (e) {
      if (e & 1) r = mul(r, base);
      base = mul(base, base);
      e >>= 1;
    }
    return r;
  }

  u64 inv(u64 a) const { return pow(a, p - 2); }
};

u64 generic_mulmod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % q == 0) return n == q;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = 1, base = a % n, e = d;
    while (e) {
      if (e & 1) x = generic_mulmod(x, base, n);
      base = generic_mulmod(base, base, n);
      e >>= 1;
    }
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = generic_mulmod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

u64 prev_prime(u64 below) {
  u64 n = below - 1;
  if (n % 2 == 0) --n;
  while (!is_prime_u64(n)) n -= 2;
  return n;
}

// LU factorization of A mod p with row pivoting (first nonzero). Multipliers
// are stored in place below a unit diagonal. Returns false if singular mod p.
struct LuModP {
  Fp fp;
  std::vector<std::vector<u64>> lu;
  std::vector<std::size_t> perm;
  std::vector<u64> inv_diag;

  explicit LuModP(u64 p) : fp(p) {}

  bool factor(std::vector<std::vector<u64>> a) {
    std::size_t n = a.size();
    perm.resize(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t pr = c;
      while (pr < n && a[pr][c] == 0) ++pr;
      if (pr == n) return false;
      std::swap(a[pr], a[c]);
      std::swap(perm[pr], perm[c]);
      u64 inv = fp.inv(a[c][c]);
      for (std::size_t r = c + 1; r < n; ++r) {
        if (a[r][c] == 0) continue;
        u64 f = fp.mul(a[r][c], inv);
        a[r][c] = f;
        const u64* src = a[c].data();
        u64* dst = a[r].data();
        for (std::size_t j = c + 1; j < n; ++j) {
          dst[j] = fp.sub(dst[j], fp.mul(f, src[j]));
        }
      }
    }
    lu = std::move(a);
    inv_diag.resize(n);
    for (std::size_t i = 0; i < n; ++i) inv_diag[i] = fp.inv(lu[i][i]);
    return true;
  }

  std::vector<u64> solve(const std::vector<u64>& b) const {
    std::size_t n = lu.size();
    std::vector<u64> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      u64 acc = b[perm[i]];
      for (std::size_t j = 0; j < i; ++j) {
        if (lu[i][j]) acc = fp.sub(acc, fp.mul(lu[i][j], y[j]));
      }
      y[i] = acc;
    }
    std::vector<u64> x(n);
    for (std::size_t ii = n; ii-- > 0;) {
      u64 acc = y[ii];
      for (std::size_t j = ii + 1; j < n; ++j) {
        if (lu[ii][j]) acc = fp.sub(acc, fp.mul(lu[ii][j], x[j]));
      }
      x[ii] = fp.mul(acc, inv_diag[ii]);
    }
    return x;
  }
};

// ------------------------------------------------------- linear systems ----

// Balance system for pi * M = pi: row i < n-1 is column i of M minus e_i,
// the last row is the normalization sum(pi) = 1.
void build_balance_system(const DenseKernel& M, std::vector<std::vector<Rat>>& A,
                          std::vector<Rat>& rhs) {
  std::size_t n = M.size();
  A.assign(n, std::vector<Rat>(n, Rat(0)));
  rhs.assign(n, Rat(0));
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t v = 0; v < n; ++v) {
      if (M.rows[v][i] != 0) A[i][v] = M.rows[v][i];
    }
    A[i][i] -= 1;
  }
  for (std::size_t v = 0; v < n; ++v) A[n - 1][v] = 1;
  rhs[n - 1] = 1;
}

std::vector<Rat> solve_direct(std::vector<std::vector<Rat>> A, std::vector<Rat> rhs) {
  std::size_t n = A.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pr = c;
    while (pr < n && A[pr][c] == 0) ++pr;
    if (pr == n) throw SingularSystem("balance system is rank-deficient");
    std::swap(A[pr], A[c]);
    std::swap(rhs[pr], rhs[c]);
    for (std::size_t r = c + 1; r < n; ++r) {
      if (A[r][c] == 0) continue;
      Rat f = A[r][c] / A[c][c];
      A[r][c] = 0;
      for (std::size_t j = c + 1; j < n; ++j) {
        if (A[c][j] != 0) A[r][j] -= f * A[c][j];
      }
      rhs[r] -= f * rhs[c];
    }
  }
  std::vector<Rat> x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    Rat acc = rhs[ii];
    for (std::size_t j = ii + 1; j < n; ++j) {
      if (A[ii][j] != 0) acc -= A[ii][j] * x[j];
    }
    x[ii] = acc / A[ii][ii];
  }
  return x;
}

// Attempts rational reconstruction of u mod m with both numerator and
// denominator bounded by sqrt(m/2). Returns false when no candidate exists.
bool rational_reconstruct(const mpz_class& u, const mpz_class& m, Rat& out) {
  mpz_class bound;
  mpz_sqrt(bound.get_mpz_t(), mpz_class((m - 1) / 2).get_mpz_t());
  mpz_class r0 = m, r1 = u % m;
  if (r1 < 0) r1 += m;
  mpz_class t0 = 0, t1 = 1;
  while (r1 > bound) {
    mpz_class q = r0 / r1;
    mpz_class r2 = r0 - q * r1;
    mpz_class t2 = t0 - q * t1;
    r0 = r1;
    r1 = r2;
    t0 = t1;
    t1 = t2;
  }
  if (t1 == 0) return false;
  mpz_class den = t1 < 0 ? mpz_class(-t1) : t1;
  mpz_class num = t1 < 0 ? mpz_class(-r1) : r1;
  if (den > bound) return false;
  Rat v(num, den);
  v.canonicalize();
  out = v;
  return true;
}

// p-adic lifting: factor A once mod p, then expand the solution digit by
// digit in base p until every entry reconstructs to a rational that passes
// exact verification against the original system.
bool solve_lifted(const std::vector<std::vector<Rat>>& A, const std::vector<Rat>& rhs,
                  std::vector<Rat>& out) {
  std::size_t n = A.size();
  // Scale each row to integers.
  std::vector<std::vector<mpz_class>> Az(n, std::vector<mpz_class>(n));
  std::vector<mpz_class> bz(n);
  for (std::size_t i = 0; i < n; ++i) {
    mpz_class d = 1;
    for (std::size_t j = 0; j < n; ++j) {
      mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), A[i][j].get_den().get_mpz_t());
    }
    mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), rhs[i].get_den().get_mpz_t());
    for (std::size_t j = 0; j < n; ++j) {
      mpz_class scaled = A[i][j].get_num() * (d / A[i][j].get_den());
      Az[i][j] = scaled;
    }
    bz[i] = rhs[i].get_num() * (d / rhs[i].get_den());
  }

  u64 p = kMersenne61;
  LuModP lu(p);
  for (int attempt = 0; attempt < 3; ++attempt) {
    Fp fp(p);
    std::vector<std::vector<u64>> Ap(n, std::vector<u64>(n));
    mpz_class tmp;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        tmp = Az[i][j] % static_cast<unsigned long>(p);
        if (tmp < 0) tmp += static_cast<unsigned long>(p);
        Ap[i][j] = tmp.get_ui();
      }
    }
    lu = LuModP(p);
    if (lu.factor(std::move(Ap))) break;
    if (attempt == 2) return false;  // likely singular over Q; caller decides
    p = prev_prime(p);
  }
  const Fp fp(p);

  std::vector<mpz_class> residual = bz;
  std::vector<mpz_class> X(n, 0);
  mpz_class pk = 1;  // p^iterations
  std::vector<u64> rmod(n), digit;
  mpz_class acc, t;

  // Generous cap: solution height is bounded by the Hadamard bound of the
  // scaled system; 70 bits per row entry is far above anything drawn here.
  long long max_iters = static_cast<long long>((n * 70 * 2) / 61 + 64);
  long long next_attempt = 8;
  for (long long it = 1; it <= max_iters; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      t = residual[i] % static_cast<unsigned long>(p);
      if (t < 0) t += static_cast<unsigned long>(p);
      rmod[i] = t.get_ui();
    }
    digit = lu.solve(rmod);
    for (std::size_t j = 0; j < n; ++j) {
      if (digit[j]) {
        mpz_set_ui(t.get_mpz_t(), digit[j]);
        X[j] += t * pk;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      acc = residual[i];
      for (std::size_t j = 0; j < n; ++j) {
        if (digit[j] && Az[i][j] != 0) {
          mpz_submul_ui(acc.get_mpz_t(), Az[i][j].get_mpz_t(), digit[j]);
        }
      }
      mpz_divexact_ui(residual[i].get_mpz_t(), acc.get_mpz_t(),
                      static_cast<unsigned long>(p));
    }
    pk *= static_cast<unsigned long>(p);

    if (it == next_attempt || it == max_iters) {
      next_attempt *= 2;
      std::vector<Rat> cand(n);
      bool ok = true;
      for (std::size_t j = 0; j < n && ok; ++j) {
        ok = rational_reconstruct(X[j], pk, cand[j]);
      }
      if (!ok) continue;
      // Exact verification of the full system.
      bool verified = true;
      for (std::size_t i = 0; i < n && verified; ++i) {
        Rat lhs = 0;
        for (std::size_t j = 0; j < n; ++j) {
          if (Az[i][j] != 0 && cand[j] != 0) lhs += Rat(Az[i][j]) * cand[j];
        }
        verified = (lhs == Rat(bz[i]));
      }
      if (verified) {
        out = std::move(cand);
        return true;
      }
    }
  }
  return false;
}

}  // namespace

std::vector<Rat> solve_stationary(const DenseKernel& M) {
  std::size_t n = M.size();
  if (n == 0) throw SingularSystem("solve_stationary: empty kernel");
  std::vector<std::vector<Rat>> A;
  std::vector<Rat> rhs;
  build_balance_system(M, A, rhs);
  if (n > kLiftedSolveThreshold) {
    std::vector<Rat> x;
    if (solve_lifted(A, rhs, x)) return x;
    // Lifting is inconclusive only on (near-)singular systems; the direct
    // elimination below settles it exactly.
  }
  return solve_direct(std::move(A), std::move(rhs));
}

std::vector<double> solve_stationary_float(const DenseKernel& M, double tol) {
  std::size_t n = M.size();
  if (n == 0) throw SingularSystem("solve_stationary_float: empty kernel");
  std::vector<std::vector<double>> Md(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) Md[i][j] = to_double(M.rows[i][j]);
  }
  std::vector<double> v(n, 1.0 / static_cast<double>(n)), next(n);
  for (long iter = 0; iter < 500000; ++iter) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double vi = v[i];
      if (vi == 0.0) continue;
      const auto& row = Md[i];
      for (std::size_t j = 0; j < n; ++j) next[j] += vi * row[j];
    }
    double norm = 0.0;
    for (double x : next) norm += x;
    for (double& x : next) x /= norm;
    double residual = 0.0;
    for (std::size_t j = 0; j < n; ++j) residual += std::abs(next[j] - v[j]);
    v.swap(next);
    if (residual <= tol) return v;
  }
  throw SingularSystem("power iteration did not reach the requested residual");
}

std::vector<std::vector<Rat>> mat_mul(const std::vector<std::vector<Rat>>& A,
                                      const std::vector<std::vector<Rat>>& B) {
  std::size_t n = A.size();
  std::vector<std::vector<Rat>> C(n, std::vector<Rat>(n, Rat(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      if (A[i][k] == 0) continue;
      const Rat& a = A[i][k];
      for (std::size_t j = 0; j < n; ++j) {
        if (B[k][j] != 0) C[i][j] += a * B[k][j];
      }
    }
  }
  return C;
}

std::vector<std::vector<Rat>> mat_pow(const std::vector<std::vector<Rat>>& A, long long k) {
  std::size_t n = A.size();
  std::vector<std::vector<Rat>> result(n, std::vector<Rat>(n, Rat(0)));
  for (std::size_t i = 0; i < n; ++i) result[i][i] = 1;
  std::vector<std::vector<Rat>> base = A;
  while (k > 0) {
    if (k & 1) result = mat_mul(result, base);
    k >>= 1;
    if (k) base = mat_mul(base, base);
  }
  return result;
}

PowerCheck matrix_power_check(const DenseKernel& M, long long k) {
  auto Pk = mat_pow(M.rows, k);
  auto Pk1 = mat_mul(Pk, M.rows);
  bool rows_equal = true;
  for (std::size_t i = 1; i < Pk.size() && rows_equal; ++i) {
    rows_equal = (Pk[i] == Pk[0]);
  }
  return PowerCheck{Pk1 == Pk, rows_equal};
}

namespace {

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char ch : field) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  quoted += '"';
  return quoted;
}

}  // namespace

void write_matrix_csv(const DenseKernel& M, std::ostream& os) {
  for (std::size_t j = 0; j < M.labels.size(); ++j) {
    if (j) os << ',';
    os << csv_quote(M.labels[j]);
  }
  os << '\n';
  for (const auto& row : M.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) os << ',';
      os << rat_to_string(row[j]);
    }
    os << '\n';
  }
}

}  // namespace rjug
