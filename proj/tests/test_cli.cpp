#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>

#include "fractalis/csv.hpp"
#include "fractalis/synth.hpp"

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("fractalis_cli_" + std::to_string(::getpid()) + "_" +
            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

int run_cli(const std::string& args) {
  const std::string cmd = std::string(FRACTALIS_BIN) + " " + args + " >/dev/null 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string run_cli_capture(const std::string& args, int& exit_code) {
  TempDir tmp;
  const std::string out_path = tmp.file("stdout.txt");
  const std::string cmd =
      std::string(FRACTALIS_BIN) + " " + args + " >" + out_path + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  exit_code = WEXITSTATUS(status);
  std::ifstream in(out_path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("synth then dfa recovers the generator exponent") {
  TempDir dir;
  const std::string series = dir.file("a.csv");
  CHECK(run_cli("synth --kind fgn --hurst 0.7 --n 4096 --seed 1 --out " + series) == 0);

  int code = 0;
  const std::string out = run_cli_capture("dfa --in " + series, code);
  CHECK(code == 0);
  REQUIRE(out.rfind("H = ", 0) == 0);
  const double h = std::stod(out.substr(4));
  CHECK(std::abs(h - 0.7) < 0.12);
}

TEST_CASE("missing input exits 2 and names the path") {
  TempDir tmp;
  const std::string out_path = tmp.file("stderr.txt");
  const std::string cmd = std::string(FRACTALIS_BIN) + " dfa --in /no/such/file.csv 2>" +
                          out_path + " >/dev/null";
  const int status = std::system(cmd.c_str());
  CHECK(WEXITSTATUS(status) == 2);
  CHECK(slurp(out_path).find("/no/such/file.csv") != std::string::npos);
}

TEST_CASE("degenerate q grid exits 1") {
  TempDir dir;
  const std::string series = dir.file("x.csv");
  REQUIRE(run_cli("synth --kind fgn --hurst 0.5 --n 4096 --seed 2 --out " + series) == 0);
  CHECK(run_cli("mfdfa --in " + series + " --q 0:0:1 --out " + dir.file("s.csv")) == 1);
  CHECK(run_cli("mfdfa --in " + series + " --scales 30:500:1log --out " + dir.file("s.csv")) == 1);
}

TEST_CASE("unknown flags exit 1") {
  CHECK(run_cli("dfa --frobnicate 1") == 1);
  CHECK(run_cli("nosuchcommand") == 1);
}

TEST_CASE("synth is byte-deterministic per seed") {
  TempDir dir;
  REQUIRE(run_cli("synth --kind fbm --hurst 0.4 --n 2048 --seed 7 --out " + dir.file("a.csv")) ==
          0);
  REQUIRE(run_cli("synth --kind fbm --hurst 0.4 --n 2048 --seed 7 --out " + dir.file("b.csv")) ==
          0);
  REQUIRE(run_cli("synth --kind fbm --hurst 0.4 --n 2048 --seed 8 --out " + dir.file("c.csv")) ==
          0);
  CHECK(slurp(dir.file("a.csv")) == slurp(dir.file("b.csv")));
  CHECK(slurp(dir.file("a.csv")) != slurp(dir.file("c.csv")));
}

TEST_CASE("mfdfa writes a spectrum that reloads with 15 h values") {
  TempDir dir;
  const std::string series = dir.file("x.csv");
  REQUIRE(run_cli("synth --kind binomial_cascade --p 0.75 --depth 13 --seed 3 --out " + series) ==
          0);
  const std::string spec_path = dir.file("spec.csv");
  CHECK(run_cli("mfdfa --in " + series + " --scales 30:500:10log --q -5:5:16 --out " +
                spec_path) == 0);
  const auto spec = fractalis::csv::read_spectrum(spec_path);
  CHECK(spec.q.size() == 16);
  CHECK(spec.h.size() == 15);
}

TEST_CASE("bands filters a trial file in place of its channels") {
  TempDir dir;
  fractalis::Trial t;
  t.subject_id = "s01";
  t.labels = {{"valence", 5.0}, {"arousal", 5.0}};
  t.channels.emplace_back("F3", fractalis::synth::gen_white_noise(1024, 1));
  t.channels.emplace_back("F4", fractalis::synth::gen_white_noise(1024, 2));
  fractalis::csv::write_trial(dir.file("t.csv"), t);

  CHECK(run_cli("bands --in " + dir.file("t.csv") + " --band alpha --out " + dir.file("a.csv")) ==
        0);
  const fractalis::Trial filtered = fractalis::csv::read_trial(dir.file("a.csv"));
  CHECK(filtered.channels.size() == 2);
  CHECK(filtered.subject_id == "s01");
  // band-limited output has less energy than the raw input
  double raw_e = 0.0, band_e = 0.0;
  for (double v : t.channels[0].second.samples) raw_e += v * v;
  for (double v : filtered.channels[0].second.samples) band_e += v * v;
  CHECK(band_e < raw_e);
}

TEST_CASE("config file supplies defaults that flags override") {
  TempDir dir;
  std::ofstream cfg(dir.file("run.cfg"));
  cfg << "kind=fgn\nhurst=0.8\nn=1024\nout=" << dir.file("from_cfg.csv") << "\n";
  cfg.close();

  CHECK(run_cli("synth --config " + dir.file("run.cfg") + " --seed 5") == 0);
  CHECK(fs::exists(dir.file("from_cfg.csv")));

  // flag wins over the config value
  CHECK(run_cli("synth --config " + dir.file("run.cfg") + " --seed 5 --out " +
                dir.file("flag.csv")) == 0);
  CHECK(fs::exists(dir.file("flag.csv")));
}

TEST_CASE("features then classify over a trial directory") {
  TempDir dir;
  const std::string trials = dir.file("trials");
  fs::create_directories(trials);
  std::uint64_t seed = 1;
  for (int subj = 0; subj < 3; ++subj) {
    for (int t = 0; t < 10; ++t) {
      const bool high = t % 2 == 0;
      fractalis::Trial trial;
      trial.subject_id = "s" + std::to_string(subj);
      trial.labels = {{"arousal", high ? 8.0 : 2.0}, {"valence", 5.0}};
      trial.channels.emplace_back("C3",
                                  fractalis::synth::gen_fgn(high ? 0.8 : 0.3, 4096, seed++));
      fractalis::csv::write_trial(trials + "/s" + std::to_string(subj) + "_t" +
                                      std::to_string(t) + ".csv",
                                  trial);
    }
  }
  const std::string feats = dir.file("feats.csv");
  CHECK(run_cli("features --in " + trials + " --family hfd --band raw --channels C3 " +
                "--label arousal --out " + feats) == 0);
  const auto fm = fractalis::csv::read_feature_matrix(feats);
  CHECK(fm.rows.size() == 30);
  CHECK(fm.feature_names.size() == 3);  // 3 full 15 s windows in 32 s
  CHECK(fm.label_name == "arousal");

  // worker count must not affect the bytes
  const std::string feats1 = dir.file("feats_t1.csv");
  const std::string cmd1 = "FRACTALIS_THREADS=1 " + std::string(FRACTALIS_BIN) +
                           " features --in " + trials +
                           " --family hfd --band raw --channels C3 --label arousal --out " +
                           feats1 + " >/dev/null 2>&1";
  const std::string feats4 = dir.file("feats_t4.csv");
  const std::string cmd4 = "FRACTALIS_THREADS=4 " + std::string(FRACTALIS_BIN) +
                           " features --in " + trials +
                           " --family hfd --band raw --channels C3 --label arousal --out " +
                           feats4 + " >/dev/null 2>&1";
  REQUIRE(std::system(cmd1.c_str()) == 0);
  REQUIRE(std::system(cmd4.c_str()) == 0);
  CHECK(slurp(feats1) == slurp(feats4));
  CHECK(slurp(feats1) == slurp(feats));

  int code = 0;
  const std::string out =
      run_cli_capture("classify --features " + feats + " --protocol dependent --out " +
                          dir.file("report.csv"),
                      code);
  CHECK(code == 0);
  CHECK(out.find("mean accuracy") != std::string::npos);
  const auto report = fractalis::csv::read_table(dir.file("report.csv"));
  CHECK(report.columns == std::vector<std::string>{"fold", "accuracy"});
  CHECK(report.rows.size() == 4);  // 3 subjects + mean row

  // mismatched label name is a usage error
  CHECK(run_cli("classify --features " + feats + " --label valence --out " +
                dir.file("r2.csv")) == 1);
  // bad protocol is a usage error
  CHECK(run_cli("classify --features " + feats + " --protocol nested --out " +
                dir.file("r3.csv")) == 1);
}

TEST_CASE("psd and hfd and adf and mfd run end to end on a series") {
  TempDir dir;
  const std::string series = dir.file("x.csv");
  REQUIRE(run_cli("synth --kind fgn --hurst 0.3 --n 7680 --seed 4 --out " + series) == 0);
  CHECK(run_cli("psd --in " + series + " --out " + dir.file("psd.csv")) == 0);
  CHECK(run_cli("hfd --in " + series + " --out " + dir.file("hfd.csv")) == 0);
  CHECK(run_cli("adf --in " + series + " --window 1280 --hop 640 --out " + dir.file("adf.csv")) ==
        0);
  CHECK(run_cli("mfd --in " + series + " --out " + dir.file("mfd.csv")) == 0);
  const auto fg = fractalis::csv::read_fractogram(dir.file("mfd.csv"));
  CHECK(fg.times.size() == 7);
  CHECK(fg.scales.size() == 268);
}

}  // TEST_SUITE
