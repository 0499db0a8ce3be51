#include "cli_helpers.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fs = std::filesystem;

namespace {

std::string scratch_root() {
  static const std::string root = [] {
    std::string r = "/tmp/purify_cli_" + std::to_string(::getpid());
    fs::create_directories(r);
    return r;
  }();
  return root;
}

std::atomic<int> counter{0};

}  // namespace

CliRun run_cli(const std::string& args) {
  const std::string capture =
      scratch_root() + "/cap" + std::to_string(counter.fetch_add(1)) + ".txt";
  const std::string cmd = std::string("\"") + PURIFY_BIN + "\" " + args + " >" +
                          capture + " 2>&1";
  const int raw = std::system(cmd.c_str());
  CliRun r;
  r.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.output = slurp(capture);
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

bool file_exists(const std::string& path) { return fs::exists(path); }

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path);
}

std::string fresh_dir(const std::string& tag) {
  std::string d = scratch_root() + "/" + tag + std::to_string(counter.fetch_add(1));
  fs::create_directories(d);
  return d;
}
