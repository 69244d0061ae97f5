#include "hpin/walk.hpp"

#include <cmath>
#include <stdexcept>

namespace hpin {

WalkTables build_q_table_general(int b, int s, int n) {
  if (b < 2 || s < 2) throw std::invalid_argument("build_q_table: b,s >= 2");
  if (n < 0) throw std::invalid_argument("build_q_table: n >= 0");
  WalkTables t;
  t.b = b;
  t.s = s;
  t.q.reserve(n + 1);
  t.log_q_sum.reserve(n + 1);
  t.q.push_back(0.0);
  t.log_q_sum.push_back(0.0);  // empty sum at m = 0 and m = 1
  double q = 0.0;
  double acc = 0.0;
  for (int m = 1; m <= n; ++m) {
    q = (std::pow(q, s) + (b - 1)) / b;
    t.q.push_back(q);
    t.log_q_sum.push_back(acc);  // sum over j = 1 .. m-1
    acc += std::log(q);
  }
  return t;
}

WalkTables build_q_table(int s, int n) { return build_q_table_general(s, s, n); }

double log_p_kn(const WalkTables& tables, int k, int n) {
  if (tables.b != tables.s)
    throw std::invalid_argument("log_p_kn: table must have b == s");
  if (k == 0)
    throw std::invalid_argument("log_p_kn: k = 0 is degenerate (q_0 = 0)");
  if (k < 0 || n < k) throw std::out_of_range("log_p_kn: need 0 < k <= n");
  if (n >= static_cast<int>(tables.q.size()))
    throw std::out_of_range("log_p_kn: n beyond table");
  if (k == n) return 0.0;  // empty product
  // sum_{j=k}^{n-1} log q_j = log_q_sum[n] - log_q_sum[k]
  return (tables.s - 1) * (tables.log_q_sum[n] - tables.log_q_sum[k]);
}

PathCount path_count(int b, int s, int n) {
  if (b < 2 || s < 2 || n < 0) throw std::invalid_argument("path_count: bad args");
  PathCount pc;
  pc.log_value = std::log(double(b)) * (std::pow(double(s), n) - 1.0) / (s - 1);
  if (n <= 12) {
    boost::multiprecision::cpp_int c = 1;
    for (int m = 0; m < n; ++m) {
      boost::multiprecision::cpp_int p = 1;
      for (int j = 0; j < s; ++j) p *= c;
      c = b * p;
    }
    pc.exact = c;
  }
  return pc;
}

}  // namespace hpin
