#include "lpib/verify.hpp"

namespace lpib {

nlohmann::json Report::to_json() const { return {}; }
std::string Report::summary_line() const { return name; }
std::vector<std::string> check_names() { return {}; }
std::vector<Report> run_check(const std::string&, const CheckConfig&) { return {}; }
std::vector<Report> run_all_checks(const CheckConfig&) { return {}; }

}  // namespace lpib
