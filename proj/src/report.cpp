#include "quadlab/report.hpp"

namespace quadlab {

std::string to_string(Verdict v)
{
  switch (v) {
  case Verdict::Pass: return "pass";
  case Verdict::Fail: return "fail";
  case Verdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

} // namespace quadlab
