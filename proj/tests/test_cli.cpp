#include "cohere/cli.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using namespace cohere;

namespace {

const double kRt2 = 1.0 / std::sqrt(2.0);

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("cohere_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const nlohmann::json& j) {
    const std::string p = (dir_ / name).string();
    io::save(p, j);
    return p;
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
  std::ostringstream out_, err_;
};

CMatrix mat2(cplx a, cplx b, cplx c, cplx d) {
  CMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST_F(CliTest, measure_examples) {
  cli::MeasureArgs a;
  a.state_path = write("plus.json", io::state_to_json(PureState{kRt2, kRt2}));
  EXPECT_EQ(cli::cmd_measure(a, out_, err_), cli::kOk);

  a.state_path = write("u3.json", io::state_to_json(PureState::maximally_coherent(3)));
  a.functional.name = "l1";
  EXPECT_EQ(cli::cmd_measure(a, out_, err_), cli::kOk);

  a.state_path = write("w.json", io::state_to_json(PureState::from_probabilities({0.8, 0.1, 0.1})));
  a.functional.name = "kyfan";
  a.functional.l = 2;
  EXPECT_EQ(cli::cmd_measure(a, out_, err_), cli::kOk);
  EXPECT_EQ(out_.str(), "1.000000000000\n2.000000000000\n0.200000000000\n");
}

TEST_F(CliTest, measure_errors) {
  cli::MeasureArgs a;
  a.state_path = path("missing.json");
  EXPECT_EQ(cli::cmd_measure(a, out_, err_), cli::kValidationFailure);
  a.state_path = write("plus.json", io::state_to_json(PureState{kRt2, kRt2}));
  a.functional.name = "alpha";
  a.functional.alpha = 1.5;
  EXPECT_EQ(cli::cmd_measure(a, out_, err_), cli::kUsageError);
  a.functional.name = "kyfan";
  a.functional.l = 1;
  EXPECT_EQ(cli::cmd_measure(a, out_, err_), cli::kUsageError);
  EXPECT_FALSE(err_.str().empty());
}

TEST_F(CliTest, convert_two_copy_pair) {
  cli::ConvertArgs a;
  a.source_path = write("psi.json", io::state_to_json(PureState{kRt2, kRt2, 0.0}));
  a.target_path = write("phi.json", io::state_to_json(PureState::maximally_coherent(3)));
  EXPECT_EQ(cli::cmd_convert(a, out_, err_), cli::kOk);
  EXPECT_EQ(out_.str(), "0.000000000000\n");

  out_.str("");
  a.source_copies = 2;
  EXPECT_EQ(cli::cmd_convert(a, out_, err_), cli::kOk);
  EXPECT_EQ(out_.str(), "1.000000000000\n");

  out_.str("");
  a.source_copies = 1;
  a.target_copies = 2;
  EXPECT_EQ(cli::cmd_convert(a, out_, err_), cli::kOk);
  EXPECT_NE(out_.str().find("0.000000000000\nsupport shortcut"), std::string::npos);
}

TEST_F(CliTest, convert_copies_table) {
  cli::ConvertArgs a;
  a.source_path = write("psi.json", io::state_to_json(PureState{kRt2, kRt2, 0.0}));
  a.target_path = write("phi.json", io::state_to_json(PureState::maximally_coherent(3)));
  a.max_target_copies = 3;
  EXPECT_EQ(cli::cmd_convert(a, out_, err_), cli::kOk);
  const std::string s = out_.str();
  EXPECT_NE(s.find("copies 1: 0.000000000000\n"), std::string::npos);
  EXPECT_NE(s.find("copies 3: 0.000000000000 (support shortcut)"), std::string::npos);
}

TEST_F(CliTest, convert_writes_verified_protocol) {
  cli::ConvertArgs a;
  a.source_path = write("psi.json", io::state_to_json(PureState::from_probabilities({0.8, 0.1, 0.1})));
  a.target_path = write("phi.json", io::state_to_json(PureState::from_probabilities({0.4, 0.3, 0.3})));
  a.protocol_path = path("protocol.json");
  EXPECT_EQ(cli::cmd_convert(a, out_, err_), cli::kOk);
  EXPECT_EQ(out_.str().substr(0, 15), "0.333333333333\n");

  const auto j = io::load(*a.protocol_path);
  EXPECT_EQ(j["stages"].size(), 2u);
  EXPECT_NEAR(j["verification"]["composed_success_probability"].get<double>(), 1.0 / 3.0, 1e-12);
  EXPECT_GE(j["verification"]["min_success_fidelity"].get<double>(), 1.0 - 1e-12);
  EXPECT_TRUE(j["verification"]["all_incoherent"].get<bool>());
  for (const auto& b : j["verification"]["branches"]) EXPECT_TRUE(b.contains("fidelity"));

  std::ostringstream vout;
  EXPECT_EQ(cli::cmd_verify_channel(*a.protocol_path, vout, err_), cli::kOk);
  EXPECT_NE(vout.str().find("stage 2:"), std::string::npos);
}

TEST_F(CliTest, verify_channel) {
  EXPECT_EQ(cli::cmd_verify_channel(write("id.json", io::channel_to_json(KrausSet::identity(3))), out_, err_),
            cli::kOk);
  EXPECT_NE(out_.str().find("incoherent: yes"), std::string::npos);

  out_.str("");
  const KrausSet hadamard({mat2(kRt2, kRt2, kRt2, -kRt2)});
  EXPECT_EQ(cli::cmd_verify_channel(write("h.json", io::channel_to_json(hadamard)), out_, err_),
            cli::kValidationFailure);
  EXPECT_NE(out_.str().find("witness: operator 1, column 1, rows 1 and 2"), std::string::npos);

  out_.str("");
  const KrausSet half({mat2(0.5, 0, 0, 0.5)});
  EXPECT_EQ(cli::cmd_verify_channel(write("half.json", io::channel_to_json(half)), out_, err_),
            cli::kValidationFailure);
  EXPECT_NE(out_.str().find("7.500e-01 (FAIL)"), std::string::npos);
}

TEST_F(CliTest, ladder) {
  EXPECT_EQ(cli::cmd_ladder(write("psi.json", io::state_to_json(PureState::from_probabilities({0.8, 0.1, 0.1}))),
                            write("phi.json", io::state_to_json(PureState::from_probabilities({0.4, 0.3, 0.3}))),
                            out_, err_),
            cli::kOk);
  const std::string s = out_.str();
  EXPECT_NE(s.find("breakpoints: l_1=2 l_2=1"), std::string::npos);
  EXPECT_NE(s.find("r_1=0.333333333333 r_2=2.000000000000"), std::string::npos);
  EXPECT_NE(s.find("success probability: 0.333333333333"), std::string::npos);

  EXPECT_EQ(cli::cmd_ladder(write("a.json", io::state_to_json(PureState{kRt2, kRt2, 0.0})),
                            write("b.json", io::state_to_json(PureState::maximally_coherent(3))), out_, err_),
            cli::kValidationFailure);
}

TEST_F(CliTest, roof) {
  cli::RoofArgs a;
  a.density_path = write("pure.json", io::density_to_json(DensityMatrix::pure(PureState{kRt2, kRt2})));
  a.ensemble_path = path("ens.json");
  EXPECT_EQ(cli::cmd_roof(a, out_, err_), cli::kOk);
  EXPECT_NE(out_.str().find("upper bound: 1.000000000000"), std::string::npos);
  EXPECT_EQ(io::load(*a.ensemble_path)["quality"], "upper-bound");

  out_.str("");
  a.density_path = write("diag.json", io::density_to_json(DensityMatrix::diagonal({0.5, 0.5})));
  EXPECT_EQ(cli::cmd_roof(a, out_, err_), cli::kOk);
  EXPECT_NE(out_.str().find("upper bound: 0.000000000000"), std::string::npos);

  CMatrix bad(2, 2);
  bad << 0.5, 0.8, 0.8, 0.5;
  nlohmann::json j{{"dim", 2}, {"entries", io::detail::encode(bad)}};
  a.density_path = write("bad.json", j);
  EXPECT_EQ(cli::cmd_roof(a, out_, err_), cli::kValidationFailure);
}

TEST_F(CliTest, roof_is_deterministic_and_bounded) {
  CMatrix m(3, 3);
  m << 0.5, cplx(0.1, 0.1), 0.05, cplx(0.1, -0.1), 0.3, 0.1, 0.05, 0.1, 0.2;
  const DensityMatrix rho(m);
  cli::RoofArgs a;
  a.density_path = write("rho.json", io::density_to_json(rho));
  a.functional.name = "l1";
  a.restarts = 2;
  a.seed = 5;
  std::ostringstream first, second;
  EXPECT_EQ(cli::cmd_roof(a, first, err_), cli::kOk);
  EXPECT_EQ(cli::cmd_roof(a, second, err_), cli::kOk);
  EXPECT_EQ(first.str(), second.str());
  const double value = std::stod(first.str().substr(std::string("upper bound: ").size()));
  EXPECT_LE(value, eigen_ensemble_average(builtin::l1(), rho) + 1e-9);
}

TEST_F(CliTest, demo_command) {
  EXPECT_EQ(cli::cmd_paper_demo({}, out_, err_), cli::kOk);
  EXPECT_NE(out_.str().find("all checks passed"), std::string::npos);
  EXPECT_EQ(out_.str().find("FAIL"), std::string::npos);

  std::ostringstream neg;
  EXPECT_EQ(cli::cmd_paper_demo({false, -1.0}, neg, err_), cli::kValidationFailure);
  EXPECT_NE(neg.str().find("FAIL"), std::string::npos);

  std::ostringstream js;
  EXPECT_EQ(cli::cmd_paper_demo({true, 1e-12}, js, err_), cli::kOk);
  const auto j = io::parse(js.str());
  EXPECT_TRUE(j["all_pass"].get<bool>());
  EXPECT_GE(j["checks"].size(), 10u);
}
