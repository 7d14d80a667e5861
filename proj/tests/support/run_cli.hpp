#pragma once
// Spawns the built CLI binary (path from NETMIMO_CLI, set by the test
// harness) with stdout/stderr captured to files, for end-to-end checks of
// exit codes and emitted bytes.
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace testcli {

namespace fs = std::filesystem;

inline std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline fs::path temp_dir() {
  static int counter = 0;
  fs::path dir = fs::temp_directory_path() /
                 ("netmimo_test_" + std::to_string(::getpid()) + "_" + std::to_string(++counter));
  fs::create_directories(dir);
  return dir;
}

inline fs::path scenario_path(const std::string& name) {
  const char* dir = std::getenv("NETMIMO_SCENARIO_DIR");
  return fs::path(dir ? dir : "scenarios") / name;
}

inline fs::path campaign_path(const std::string& name) {
  const char* dir = std::getenv("NETMIMO_CAMPAIGN_DIR");
  return fs::path(dir ? dir : "campaigns") / name;
}

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

inline CliResult run_cli(const std::string& args) {
  const char* bin = std::getenv("NETMIMO_CLI");
  if (!bin) throw std::runtime_error("NETMIMO_CLI not set; run through ctest");
  fs::path dir = temp_dir();
  fs::path out_file = dir / "stdout";
  fs::path err_file = dir / "stderr";
  std::string cmd = std::string(bin) + " " + args + " >" + out_file.string() + " 2>" +
                    err_file.string();
  int status = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_file(out_file);
  r.err = read_file(err_file);
  fs::remove_all(dir);
  return r;
}

}  // namespace testcli
