// End-to-end tour on the smallest interesting example: certify
// f(x) = 1 - cos(2 pi x / 6) on Z_6, verify the certificate, and lift it to
// a sum of Hermitian squares on the circle.

#include <cmath>
#include <cstdio>

#include "fsos/fsos.hpp"

int main() {
  using namespace fsos;

  GroupSpec z6 = GroupSpec::cyclic(6);
  std::vector<cplx> values;
  for (int x = 0; x < 6; ++x) values.push_back(1.0 - std::cos(2.0 * kPi * x / 6.0));
  GroupFunction f(z6, values);

  FourierExpansion e = forward_transform(f);
  std::printf("fhat has %zu nonzero coefficients:\n", e.size());
  for (const auto& [chi, c] : e.entries())
    std::printf("  chi_%lld -> %+.6f\n", static_cast<long long>(chi), c.real());

  CertifyResult result = certify(f);
  const FsosCertificate& cert = *result.certificate;
  std::printf("\ncertificate: sparsity %zu, %zu square(s), coefficient error %.2e\n",
              cert.sparsity(), cert.squares.size(), cert.reported_error);
  for (const auto& g : cert.squares) {
    std::printf("  |");
    bool first = true;
    for (const auto& [chi, c] : g.entries()) {
      std::printf("%s%.4f chi_%lld", first ? "" : " + ", c.real(),
                  static_cast<long long>(chi));
      first = false;
    }
    std::printf("|^2\n");
  }

  VerifyReport report = verify(e, cert);
  std::printf("\nverify: %s (deviation %.2e)\n", report.accepted ? "accept" : "reject",
              report.deviation);

  SohsExpression sohs = fsos_to_sohs(cert);
  std::printf("\nlifted to the circle:\n%s", sohs.to_string().c_str());
  return report.accepted ? 0 : 1;
}
