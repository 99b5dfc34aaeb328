#pragma once

#include <chrono>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include "errors.hpp"
#include "parser.hpp"
#include "printer.hpp"
#include "real_nf.hpp"
#include "realpoly.hpp"
#include "simplify.hpp"
#include "vs.hpp"

namespace pcqe {

inline double default_backend_timeout() {
    if (const char* v = std::getenv("PCQE_BACKEND_TIMEOUT_SECS")) {
        char* end = nullptr;
        double d = std::strtod(v, &end);
        if (end != v && d > 0) return d;
    }
    return 300.0;
}

// Elimination backend: the built-in engine or an external process speaking
// the pipe protocol (one prenex formula on stdin, one quantifier-free
// formula on stdout, exit status 0).
struct Backend {
    enum class Kind { Builtin, External };

    Kind kind = Kind::Builtin;
    std::string command;
    double timeout_secs = default_backend_timeout();

    static Backend builtin() { return Backend{}; }

    static Backend external(std::string cmd) {
        Backend b;
        b.kind = Kind::External;
        b.command = std::move(cmd);
        return b;
    }
};

// --- protocol text ------------------------------------------------------

inline Formula real_formula_to_formula(const std::vector<RPrefixEntry>& prefix,
                                       const RFormula& matrix, const RealVarTable& table) {
    Formula m = rformula_to_formula(matrix, [&](const RAtom& a) {
        return fm::atom(qpoly_to_term_named(a.p, table.names), a.rel, tm::constant(Rational(0)));
    });
    std::vector<PrefixEntry> p;
    p.reserve(prefix.size());
    for (const auto& e : prefix) p.push_back({e.quant, Variable(table.names[e.gen])});
    return attach_prefix(p, m);
}

inline std::string print_real_request(const std::vector<RPrefixEntry>& prefix,
                                      const RFormula& matrix, const RealVarTable& table) {
    return print_formula(real_formula_to_formula(prefix, matrix, table));
}

// Ordered-ring term over known real variables.
inline QPoly term_to_qpoly(const Term& t, const RealVarTable& table) {
    const std::size_t w = table.size();
    switch (t->kind) {
        case TermKind::Constant: return QPoly::constant(w, t->value);
        case TermKind::Var: {
            auto i = table.index_of(t->var.name);
            if (!i) throw ShapeError("unknown real variable: " + t->var.name);
            return QPoly::generator(w, *i);
        }
        case TermKind::Add: return term_to_qpoly(t->args[0], table) + term_to_qpoly(t->args[1], table);
        case TermKind::Neg: return -term_to_qpoly(t->args[0], table);
        case TermKind::Mul: return term_to_qpoly(t->args[0], table) * term_to_qpoly(t->args[1], table);
        case TermKind::Pow: return term_to_qpoly(t->args[0], table).pow(t->exponent);
        case TermKind::ImagUnit:
        case TermKind::Re:
        case TermKind::Im:
        case TermKind::Conj:
            throw ShapeError("term is not in the ordered-ring fragment");
    }
    throw Error("unreachable term kind");
}

inline RFormula formula_to_rformula(const Formula& f, const RealVarTable& table) {
    switch (f->kind) {
        case FormulaKind::Top: return rf::top();
        case FormulaKind::Bot: return rf::bot();
        case FormulaKind::AtomF: {
            QPoly p = term_to_qpoly(f->atom.lhs, table) - term_to_qpoly(f->atom.rhs, table);
            return rf::atom(std::move(p), f->atom.rel);
        }
        case FormulaKind::Not: return rf::negation(formula_to_rformula(f->args[0], table));
        case FormulaKind::And:
        case FormulaKind::Or: {
            std::vector<RFormula> args;
            args.reserve(f->args.size());
            for (const auto& a : f->args) args.push_back(formula_to_rformula(a, table));
            return f->kind == FormulaKind::And ? rf::conjunction(std::move(args))
                                               : rf::disjunction(std::move(args));
        }
        case FormulaKind::Implies:
            return rf::disjunction({rf::negation(formula_to_rformula(f->args[0], table)),
                                    formula_to_rformula(f->args[1], table)});
        case FormulaKind::Iff: {
            RFormula a = formula_to_rformula(f->args[0], table);
            RFormula b = formula_to_rformula(f->args[1], table);
            return rf::conjunction({rf::disjunction({rf::negation(a), b}),
                                    rf::disjunction({rf::negation(b), a})});
        }
        case FormulaKind::Exists:
        case FormulaKind::Forall:
            throw ShapeError("quantifier in a quantifier-free response");
    }
    throw Error("unreachable formula kind");
}

// --- external process ---------------------------------------------------

namespace detail {

struct Pipe {
    int fds[2] = {-1, -1};

    Pipe() {
        if (::pipe(fds) != 0) throw BackendError("pipe() failed");
    }
    ~Pipe() {
        close_read();
        close_write();
    }
    void close_read() {
        if (fds[0] >= 0) ::close(fds[0]);
        fds[0] = -1;
    }
    void close_write() {
        if (fds[1] >= 0) ::close(fds[1]);
        fds[1] = -1;
    }
};

struct ExternalResult {
    int exit_status = -1;
    bool timed_out = false;
    std::string out;
    std::string err;
};

inline ExternalResult run_process(const std::string& command, const std::string& input,
                                  double timeout_secs) {
    Pipe in, out, err;
    pid_t pid = ::fork();
    if (pid < 0) throw BackendError("fork() failed");
    if (pid == 0) {
        ::dup2(in.fds[0], STDIN_FILENO);
        ::dup2(out.fds[1], STDOUT_FILENO);
        ::dup2(err.fds[1], STDERR_FILENO);
        in.close_write();
        out.close_read();
        err.close_read();
        ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }
    in.close_read();
    out.close_write();
    err.close_write();

    // Non-blocking writes interleaved with reads; a backend may emit output
    // before consuming all of its input.
    ::fcntl(in.fds[1], F_SETFL, O_NONBLOCK);
    ::signal(SIGPIPE, SIG_IGN);

    ExternalResult res;
    std::size_t written = 0;
    auto deadline = std::chrono::steady_clock::now() +
                    std::chrono::milliseconds(static_cast<long>(timeout_secs * 1000));
    bool out_open = true, err_open = true;
    char buf[4096];
    while (out_open || err_open || written < input.size()) {
        auto now = std::chrono::steady_clock::now();
        if (now >= deadline) {
            ::kill(pid, SIGKILL);
            ::waitpid(pid, nullptr, 0);
            res.timed_out = true;
            return res;
        }
        int wait_ms = static_cast<int>(
            std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count());
        wait_ms = std::min(wait_ms, 200);

        struct pollfd pfds[3];
        nfds_t n = 0;
        int idx_out = -1, idx_err = -1, idx_in = -1;
        if (out_open) {
            pfds[n] = {out.fds[0], POLLIN, 0};
            idx_out = static_cast<int>(n++);
        }
        if (err_open) {
            pfds[n] = {err.fds[0], POLLIN, 0};
            idx_err = static_cast<int>(n++);
        }
        if (written < input.size() && in.fds[1] >= 0) {
            pfds[n] = {in.fds[1], POLLOUT, 0};
            idx_in = static_cast<int>(n++);
        }
        if (n == 0) break;
        int rc = ::poll(pfds, n, wait_ms);
        if (rc < 0) {
            if (errno == EINTR) continue;
            ::kill(pid, SIGKILL);
            ::waitpid(pid, nullptr, 0);
            throw BackendError("poll() failed");
        }
        if (idx_in >= 0 && (pfds[idx_in].revents & (POLLOUT | POLLERR | POLLHUP))) {
            ssize_t w = ::write(in.fds[1], input.data() + written, input.size() - written);
            if (w > 0) {
                written += static_cast<std::size_t>(w);
            } else if (w < 0 && errno != EAGAIN && errno != EINTR) {
                written = input.size(); // receiver is gone; stop writing
            }
            if (written >= input.size()) in.close_write();
        }
        if (idx_out >= 0 && (pfds[idx_out].revents & (POLLIN | POLLHUP))) {
            ssize_t r = ::read(out.fds[0], buf, sizeof buf);
            if (r > 0)
                res.out.append(buf, static_cast<std::size_t>(r));
            else
                out_open = false;
        }
        if (idx_err >= 0 && (pfds[idx_err].revents & (POLLIN | POLLHUP))) {
            ssize_t r = ::read(err.fds[0], buf, sizeof buf);
            if (r > 0)
                res.err.append(buf, static_cast<std::size_t>(r));
            else
                err_open = false;
        }
    }
    in.close_write();

    int status = 0;
    while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
    res.exit_status = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

inline std::string excerpt(const std::string& s, std::size_t limit = 400) {
    std::string t = s;
    while (!t.empty() && (t.back() == '\n' || t.back() == '\r')) t.pop_back();
    if (t.size() > limit) t = t.substr(0, limit) + "...";
    return t;
}

} // namespace detail

// Sends one prenex formula to the external command and parses the
// quantifier-free response, which is trusted.
inline RFormula run_external(const std::vector<RPrefixEntry>& prefix, const RFormula& matrix,
                             const RealVarTable& table, const std::string& command,
                             double timeout_secs) {
    std::string request = print_real_request(prefix, matrix, table) + "\n";
    detail::ExternalResult res = detail::run_process(command, request, timeout_secs);
    if (res.timed_out)
        throw TimeoutError("backend timed out after " + std::to_string(timeout_secs) + "s: " +
                           command);
    if (res.exit_status != 0)
        throw BackendError("backend exited with status " + std::to_string(res.exit_status) +
                           (res.err.empty() ? "" : ": " + detail::excerpt(res.err)));
    try {
        ParseOptions opts;
        opts.allow_reserved_names = true;
        Formula f = parse_formula(res.out, opts);
        if (!is_quantifier_free(f)) throw ShapeError("response is not quantifier-free");
        return formula_to_rformula(f, table);
    } catch (const SyntaxError& e) {
        throw BackendError(std::string("unparsable backend response: ") + e.what() + ": " +
                           detail::excerpt(res.out));
    } catch (const ShapeError& e) {
        throw BackendError(std::string("malformed backend response: ") + e.what());
    }
}

// Uniform entry point for both backend kinds.
inline RFormula run_backend(const Backend& backend, const std::vector<RPrefixEntry>& prefix,
                            const RFormula& matrix, const RealVarTable& table,
                            const SignEnv& env = {}, VsStats* stats = nullptr) {
    if (backend.kind == Backend::Kind::Builtin)
        return vs_eliminate(prefix, matrix, table, env, stats);
    return run_external(prefix, matrix, table, backend.command, backend.timeout_secs);
}

} // namespace pcqe
