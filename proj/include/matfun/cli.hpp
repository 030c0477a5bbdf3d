#ifndef MATFUN_CLI_HPP
#define MATFUN_CLI_HPP

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "matfun.hpp"

namespace matfun::cli {

inline constexpr const char* kSchema = "v1";

// exit-code contract: 0 definitive, 1 usage/input error, 2 Undetermined,
// 3 NotInDomain
enum ExitCode { kOk = 0, kUsage = 1, kUndetermined = 2, kNotInDomain = 3 };

namespace detail {

// arguments starting with '@' name a file holding the actual value
inline std::string load_arg(const std::string& s) {
    if (s.empty() || s.front() != '@') return s;
    std::ifstream in(s.substr(1));
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + s.substr(1));
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline Polynomial parse_poly(const std::string& arg, const Backend& bk) {
    std::string s = load_arg(arg);
    if (!s.empty() && s.front() == '{') return poly_from_json(json::parse(s));
    return poly_from_text(bk, s);
}

inline SquareMatrix parse_matrix(const std::string& arg, const Backend& bk) {
    std::string s = load_arg(arg);
    json j = json::parse(s);
    if (j.is_array()) return matrix_from_rows_json(bk, j);
    return matrix_from_json(j);
}

inline std::string render_matrix_text(const SquareMatrix& a) {
    std::ostringstream os;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        os << (i == 0 ? "[" : " ") << "[";
        for (std::size_t j = 0; j < a.dim(); ++j) os << (j ? ", " : "") << to_string(a.at(i, j));
        os << "]" << (i + 1 == a.dim() ? "]" : ",") << "\n";
    }
    return os.str();
}

inline void emit(std::ostream& out, const json& report, const std::string& format, const std::string& text) {
    if (format == "text")
        out << text;
    else
        out << report.dump(2) << "\n";
}

inline int outcome_exit(const SolveOutcome& o) {
    switch (o.kind) {
        case SolveKind::Undetermined: return kUndetermined;
        case SolveKind::NotInDomain: return kNotInDomain;
        default: return kOk;
    }
}

inline std::string outcome_text(const SolveOutcome& o) {
    std::ostringstream os;
    switch (o.kind) {
        case SolveKind::Preimage:
            os << "verdict: preimage\n" << render_matrix_text(*o.preimage);
            break;
        case SolveKind::NoPreimage:
            os << "verdict: no preimage\ncertificate: t = " << to_string(o.certificate->t)
               << ", block size " << o.certificate->blocksize << ", fiber inside Z(f')\n";
            break;
        case SolveKind::NotInDomain:
            os << "verdict: not in domain\n";
            for (const auto& v : o.offending) os << "offending eigenvalue: " << to_string(v) << "\n";
            break;
        case SolveKind::Undetermined:
            os << "verdict: undetermined\nreason: " << o.reason << "\n";
            break;
    }
    return os.str();
}

}  // namespace detail

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"matfun: surjectivity of polynomial maps on matrix algebras"};
    app.require_subcommand(1);

    std::string poly_arg, fn_arg, matrix_arg, backend_arg = "Q", format = "json", report_arg;
    double eps = 1e-8;
    if (const char* env = std::getenv("MATFUN_EPS")) eps = std::atof(env);
    unsigned ext_bound = 1;

    auto add_common = [&](CLI::App* sub, bool with_matrix) {
        sub->add_option("--backend", backend_arg, "backend descriptor: Q, C, C:<eps>, F<p>, F<p>^<m>, or JSON");
        sub->add_option("--eps", eps, "numeric tolerance (default from MATFUN_EPS)");
        sub->add_option("--format", format, "output format: json or text")
            ->check(CLI::IsMember({"json", "text"}));
        if (with_matrix) sub->add_option("--matrix", matrix_arg, "matrix: JSON rows, full JSON object, or @file");
    };

    CLI::App* analyze = app.add_subcommand("analyze", "critical values and surjectivity of a polynomial map");
    analyze->add_option("--poly", poly_arg, "polynomial: inline text, JSON, or @file")->required();
    add_common(analyze, false);

    CLI::App* solve_cmd = app.add_subcommand("solve", "find X with f(X) = A or certify there is none");
    solve_cmd->add_option("--poly", poly_arg, "polynomial: inline text, JSON, or @file");
    solve_cmd->add_option("--fn", fn_arg, "entire function from the catalog: exp, sin, cos");
    add_common(solve_cmd, true);

    CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate f(A)");
    eval_cmd->add_option("--poly", poly_arg, "polynomial: inline text, JSON, or @file");
    eval_cmd->add_option("--fn", fn_arg, "entire function from the catalog: exp, sin, cos");
    add_common(eval_cmd, true);

    CLI::App* verify_cmd = app.add_subcommand("verify", "replay a solve report against f and A");
    verify_cmd->add_option("--poly", poly_arg, "polynomial: inline text, JSON, or @file")->required();
    verify_cmd->add_option("--report", report_arg, "solve report JSON or @file")->required();
    add_common(verify_cmd, true);

    CLI::App* oracle_cmd = app.add_subcommand("oracle", "brute-force ground truth over small finite fields");
    oracle_cmd->add_option("--poly", poly_arg, "polynomial: inline text, JSON, or @file")->required();
    oracle_cmd->add_option("--ext-bound", ext_bound, "search extensions F_{q^e}, e = 1..bound");
    add_common(oracle_cmd, true);

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kOk;
        }
        err << "error: " << e.what() << "\n";
        return kUsage;
    }

    json report = {{"schema", kSchema}};
    try {
        Backend bk = backend_from_string(backend_arg, eps);

        if (analyze->parsed()) {
            report["command"] = "analyze";
            Polynomial f = detail::parse_poly(poly_arg, bk);
            CriticalSet cs = critical_values(f);
            report["critical_values"] = critical_set_to_json(cs);
            std::ostringstream text;
            if (!cs.ambiguous.empty()) {
                report["surjective"] = "undetermined";
                text << "surjective: undetermined (numerically ambiguous values)\n";
                detail::emit(out, report, format, text.str());
                return kUndetermined;
            }
            bool surj = is_surjective(cs);
            report["surjective"] = surj;
            text << "surjective: " << (surj ? "true" : "false") << "\n";
            if (cs.kind == CriticalKind::Finite)
                for (const auto& v : cs.values) text << "critical value: " << to_string(v.t) << "\n";
            if (cs.kind == CriticalKind::AllValues) text << "critical values: all (f' = 0)\n";
            detail::emit(out, report, format, text.str());
            return kOk;
        }

        if (solve_cmd->parsed() || eval_cmd->parsed()) {
            bool is_eval = eval_cmd->parsed();
            report["command"] = is_eval ? "eval" : "solve";
            if (poly_arg.empty() == fn_arg.empty())
                throw Error(ErrorCode::InvalidArgument, "give exactly one of --poly and --fn");
            if (matrix_arg.empty()) throw Error(ErrorCode::InvalidArgument, "--matrix is required");
            if (!fn_arg.empty() && backend_arg == "Q") bk = Backend::complex_floats(eps);
            SquareMatrix a = detail::parse_matrix(matrix_arg, bk);
            if (!fn_arg.empty()) {
                EntireFunction fn = catalog(fn_arg);
                if (is_eval) {
                    SquareMatrix r = eval_entire(fn, a);
                    report["result"] = matrix_to_json(r);
                    detail::emit(out, report, format, detail::render_matrix_text(r));
                    return kOk;
                }
                SolveOutcome o = solve_entire(fn, a);
                report["outcome"] = solve_outcome_to_json(o);
                detail::emit(out, report, format, detail::outcome_text(o));
                return detail::outcome_exit(o);
            }
            Polynomial f = detail::parse_poly(poly_arg, a.backend());
            if (is_eval) {
                SquareMatrix r = mat_eval_poly(f, a);
                report["result"] = matrix_to_json(r);
                detail::emit(out, report, format, detail::render_matrix_text(r));
                return kOk;
            }
            SolveOutcome o = solve(f, a);
            report["outcome"] = solve_outcome_to_json(o);
            detail::emit(out, report, format, detail::outcome_text(o));
            return detail::outcome_exit(o);
        }

        if (verify_cmd->parsed()) {
            report["command"] = "verify";
            json rj = json::parse(detail::load_arg(report_arg));
            if (rj.contains("outcome")) rj = rj.at("outcome");
            std::string kind = rj.at("kind").get<std::string>();
            bool ok = false;
            double residual = 0;
            if (kind == "preimage") {
                if (matrix_arg.empty()) throw Error(ErrorCode::InvalidArgument, "--matrix is required for preimage replay");
                SquareMatrix x = matrix_from_json(rj.at("X"));
                Polynomial f = detail::parse_poly(poly_arg, bk);
                SquareMatrix a = detail::parse_matrix(matrix_arg, bk);
                VerifyResult v = verify(f, x, a);
                ok = v.pass;
                residual = v.residual;
            } else if (kind == "no_preimage") {
                CriticalBlockCertificate cert = certificate_from_json(rj.at("certificate"));
                Polynomial f = detail::parse_poly(poly_arg, bk);
                ok = replay_certificate(f, cert);
            } else {
                throw Error(ErrorCode::InvalidArgument, "report kind '" + kind + "' has nothing to replay");
            }
            report["verified"] = ok;
            report["residual"] = residual;
            std::ostringstream text;
            text << "verified: " << (ok ? "true" : "false") << "\n";
            detail::emit(out, report, format, text.str());
            return ok ? kOk : kUsage;
        }

        if (oracle_cmd->parsed()) {
            report["command"] = "oracle";
            Polynomial f = detail::parse_poly(poly_arg, bk);
            if (matrix_arg.empty()) {
                OracleCriticalReport r = oracle_critical_values(f, ext_bound);
                report["critical"] = oracle_critical_to_json(r);
                std::ostringstream text;
                text << "oracle critical values over F_" << r.field.field_size() << ":";
                if (r.all_values)
                    text << " all";
                else
                    for (const auto& v : r.values) text << " " << to_string(v);
                text << "\n";
                detail::emit(out, report, format, text.str());
                return kOk;
            }
            SquareMatrix a = detail::parse_matrix(matrix_arg, bk);
            OracleReport r = oracle_image_search(f, a, ext_bound);
            report["search"] = oracle_report_to_json(r);
            std::ostringstream text;
            if (r.found)
                text << "found after " << r.tested << " candidates\n" << detail::render_matrix_text(*r.witness);
            else
                text << "exhausted " << r.search_space << " (" << r.tested << " candidates), none found\n";
            detail::emit(out, report, format, text.str());
            return kOk;
        }
    } catch (const Error& e) {
        report["error"] = {{"code", to_string(e.code())}, {"message", e.what()}};
        err << report.dump(2) << "\n";
        return kUsage;
    } catch (const json::exception& e) {
        report["error"] = {{"code", "ParseError"}, {"message", e.what()}};
        err << report.dump(2) << "\n";
        return kUsage;
    }
    return kUsage;
}

}  // namespace matfun::cli

#endif
