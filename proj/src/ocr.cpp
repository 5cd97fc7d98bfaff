#include "dictscan/ocr.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <omp.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <thread>

#include <nlohmann/json.hpp>

#include "dictscan/error.hpp"
#include "dictscan/image_io.hpp"

extern char** environ;

namespace dictscan {

std::vector<std::string> OcrConfig::engine_arguments() const {
    std::string langs;
    for (const auto& l : languages) langs += (langs.empty() ? "" : "+") + l;
    return {"-l", langs, "--oem", std::to_string(engine_mode), "--psm",
            std::to_string(segmentation_mode)};
}

int OcrConfig::effective_parallelism() const {
    if (parallelism > 0) return parallelism;
    return std::max(1u, std::thread::hardware_concurrency());
}

std::string trim_trailing_whitespace(std::string s) {
    while (!s.empty() && (s.back() == ' ' || s.back() == '\n' || s.back() == '\r' ||
                          s.back() == '\t' || s.back() == '\f' || s.back() == '\v'))
        s.pop_back();
    return s;
}

std::string region_hash(const GrayImage& region) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto mix = [&h](std::uint8_t byte) {
        h ^= byte;
        h *= 0x100000001b3ull;
    };
    for (int v : {region.width(), region.height()})
        for (int shift = 0; shift < 32; shift += 8) mix(static_cast<std::uint8_t>(v >> shift));
    for (std::uint8_t px : region.pixels()) mix(px);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

struct Fd {
    int fd = -1;
    Fd() = default;
    explicit Fd(int f) : fd(f) {}
    Fd(const Fd&) = delete;
    Fd& operator=(const Fd&) = delete;
    ~Fd() { reset(); }
    void reset() {
        if (fd >= 0) ::close(fd);
        fd = -1;
    }
};

class TempPng {
public:
    explicit TempPng(const GrayImage& img) {
        std::string tmpl = (std::filesystem::temp_directory_path() / "dictscan-XXXXXX.png").string();
        const int fd = ::mkstemps(tmpl.data(), 4);
        if (fd < 0) throw BackendFailure("cannot create temporary image file");
        ::close(fd);
        path_ = tmpl;
        save_png(img, path_);
    }
    ~TempPng() {
        std::error_code ec;
        std::filesystem::remove(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

struct ProcessResult {
    int exit_code = 0;
    std::string out;
    std::string err;
};

ProcessResult run_process(const std::vector<std::string>& argv, double timeout_s) {
    int out_pipe[2], err_pipe[2];
    if (::pipe2(out_pipe, O_CLOEXEC) != 0) throw BackendFailure("pipe failed");
    Fd out_r(out_pipe[0]), out_w(out_pipe[1]);
    if (::pipe2(err_pipe, O_CLOEXEC) != 0) throw BackendFailure("pipe failed");
    Fd err_r(err_pipe[0]), err_w(err_pipe[1]);

    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, out_w.fd, STDOUT_FILENO);
    posix_spawn_file_actions_adddup2(&actions, err_w.fd, STDERR_FILENO);
    posix_spawn_file_actions_addopen(&actions, STDIN_FILENO, "/dev/null", O_RDONLY, 0);

    std::vector<char*> args;
    for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);

    pid_t pid = 0;
    const int rc = ::posix_spawnp(&pid, args[0], &actions, nullptr, args.data(), environ);
    posix_spawn_file_actions_destroy(&actions);
    if (rc == ENOENT || rc == EACCES)
        throw BackendUnavailable("OCR engine '" + argv[0] + "' not found: " + std::strerror(rc));
    if (rc != 0) throw BackendFailure("cannot start '" + argv[0] + "': " + std::strerror(rc));
    out_w.reset();
    err_w.reset();

    ProcessResult result;
    const auto deadline =
        std::chrono::steady_clock::now() + std::chrono::duration<double>(timeout_s);
    std::array<pollfd, 2> fds{{{out_r.fd, POLLIN, 0}, {err_r.fd, POLLIN, 0}}};
    std::array<std::string*, 2> sinks{&result.out, &result.err};
    int open_streams = 2;
    bool timed_out = false;
    while (open_streams > 0) {
        const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
            deadline - std::chrono::steady_clock::now());
        if (left.count() <= 0) {
            timed_out = true;
            break;
        }
        const int ready = ::poll(fds.data(), fds.size(), static_cast<int>(left.count()));
        if (ready < 0 && errno == EINTR) continue;
        if (ready <= 0) continue;
        for (std::size_t i = 0; i < fds.size(); ++i) {
            if (fds[i].fd < 0 || !(fds[i].revents & (POLLIN | POLLHUP | POLLERR))) continue;
            char buf[4096];
            const ssize_t n = ::read(fds[i].fd, buf, sizeof buf);
            if (n > 0) {
                sinks[i]->append(buf, static_cast<std::size_t>(n));
            } else {
                fds[i].fd = -1;
                --open_streams;
            }
        }
    }
    if (timed_out) ::kill(pid, SIGKILL);
    int status = 0;
    while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
    if (timed_out)
        throw BackendTimeout("OCR engine exceeded " + std::to_string(timeout_s) + " s");
    if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
    else result.exit_code = 128 + (WIFSIGNALED(status) ? WTERMSIG(status) : 0);
    if (result.exit_code == 127)
        throw BackendUnavailable("OCR engine '" + argv[0] + "' could not be executed");
    return result;
}

}  // namespace

std::string ExternalOcrBackend::recognize(const OcrRequest& request, const OcrConfig& config) const {
    if (request.region.empty()) throw std::invalid_argument("OCR request region is empty");
    const TempPng image(request.region);
    std::vector<std::string> argv{config.command, image.path().string(), "stdout"};
    for (auto& a : config.engine_arguments()) argv.push_back(std::move(a));
    ProcessResult r = run_process(argv, config.timeout_s);
    if (r.exit_code != 0)
        throw BackendFailure("OCR engine exited with status " + std::to_string(r.exit_code) +
                             ": " + trim_trailing_whitespace(r.err));
    return trim_trailing_whitespace(std::move(r.out));
}

MockOcrBackend::MockOcrBackend(std::map<std::string, std::optional<std::string>> fixtures)
    : fixtures_(std::move(fixtures)) {}

MockOcrBackend MockOcrBackend::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open OCR fixture file " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what(), 0, e.byte);
    }
    if (!doc.is_object()) throw ParseError(path.string() + ": fixture file must be an object", 0, 0);
    std::map<std::string, std::optional<std::string>> fixtures;
    for (const auto& [hash, value] : doc.items()) {
        if (value.is_null()) fixtures[hash] = std::nullopt;
        else if (value.is_string()) fixtures[hash] = value.get<std::string>();
        else throw ParseError(path.string() + ": fixture '" + hash + "' is not text or null", 0, 0);
    }
    return MockOcrBackend(std::move(fixtures));
}

std::string MockOcrBackend::recognize(const OcrRequest& request, const OcrConfig&) const {
    if (request.region.empty()) throw std::invalid_argument("OCR request region is empty");
    const std::string hash = region_hash(request.region);
    const auto it = fixtures_.find(hash);
    if (it == fixtures_.end()) return {};
    if (!it->second) throw BackendFailure("mock failure for region " + hash);
    return trim_trailing_whitespace(*it->second);
}

Rect cell_region(const Cell& cell, int margin, int page_width, int page_height) {
    const int x0 = static_cast<int>(std::lround(cell.top_left.x)) + margin;
    const int y0 = static_cast<int>(std::lround(cell.top_left.y)) + margin;
    const int x1 = static_cast<int>(std::lround(cell.bottom_right.x)) - margin;
    const int y1 = static_cast<int>(std::lround(cell.bottom_right.y)) - margin;
    return clamp({x0, y0, x1 - x0 + 1, y1 - y0 + 1}, page_width, page_height);
}

std::vector<CellText> recognize_cells(const GrayImage& page, std::span<const Cell> cells,
                                      const OcrBackend& backend, const OcrConfig& config) {
    std::vector<CellText> results(cells.size());
    const auto n = static_cast<std::ptrdiff_t>(cells.size());
#pragma omp parallel for schedule(dynamic) num_threads(config.effective_parallelism())
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        CellText& r = results[static_cast<std::size_t>(i)];
        r.cell = cells[static_cast<std::size_t>(i)];
        const Rect rect = cell_region(r.cell, config.cell_margin_px, page.width(), page.height());
        if (rect.empty()) continue;
        try {
            r.text = backend.recognize({page.crop(rect), RegionKind::table_cell}, config);
        } catch (const std::exception& e) {
            r.error = describe(e);
        }
    }
    return results;
}

}  // namespace dictscan
