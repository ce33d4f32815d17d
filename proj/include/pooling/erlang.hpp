#pragma once

namespace pooling {

/// A standalone M/M/N/N loss system: N servers offered `load` Erlangs.
struct ErlangQuery {
  int servers = 0;
  double load = 0.0;
};

/// Erlang-B blocking probability E(N, a) by the stable recurrence
/// E(n) = a E(n-1) / (n + a E(n-1)), E(0) = 1.
/// Throws DomainError when servers < 0 or load <= 0.
double erlang_b(int servers, double load);
inline double erlang_b(const ErlangQuery& q) { return erlang_b(q.servers, q.load); }

/// Offered load a with E(servers, a) = target, to relative 1e-12 in the
/// blocking value. Bisection on the strictly increasing map a -> E(N, a).
double invert_erlang_b(int servers, double target);

/// Square-root staffing approximation of E(N, N + beta sqrt(N)):
/// phi(beta) / (sqrt(N) (1 - Phi(beta))). `servers` may be any positive
/// real so the formula also serves aggregated systems.
double erlang_b_qed(double servers, double beta);

}  // namespace pooling
