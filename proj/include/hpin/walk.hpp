#pragma once

// Exact wall-avoidance probabilities of the simple random walk on diamond
// lattices:
//
//   q_0 = 0,   q_{m+1} = (q_m^s + b - 1) / b,
//
// the crossing probabilities p_{k,n} = prod_{j=k}^{n-1} q_j^{s-1} (b = s),
// and the exact trajectory counts N_0 = 1, N_{n+1} = b N_n^s.

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <vector>

namespace hpin {

struct WalkTables {
  int b = 2;
  int s = 2;
  std::vector<double> q;           // q_0 .. q_n
  std::vector<double> log_q_sum;   // log_q_sum[m] = sum_{j=1}^{m-1} log q_j
};

// General (b,s) escape recursion; the wall branch is entered with probability
// 1/b and then all s sub-diamonds must be crossed wall-free.
WalkTables build_q_table_general(int b, int s, int n);

// The b = s table used by the crossing probabilities and the certificate.
WalkTables build_q_table(int s, int n);

// log p_{k,n} = (s-1) * sum_{j=k}^{n-1} log q_j.  Requires 1 <= k <= n within
// the table (q_0 = 0 makes k = 0 degenerate) and tables built with b == s.
double log_p_kn(const WalkTables& tables, int k, int n);

struct PathCount {
  std::optional<boost::multiprecision::cpp_int> exact;  // n <= 12 only
  double log_value = 0.0;  // log N_n = log(b) (s^n - 1)/(s - 1)
};

PathCount path_count(int b, int s, int n);

}  // namespace hpin
