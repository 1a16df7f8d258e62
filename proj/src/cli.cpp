#include "shaforge/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "shaforge/certio.hpp"
#include "shaforge/construct.hpp"
#include "shaforge/errors.hpp"
#include "shaforge/obstruction.hpp"
#include "shaforge/theta.hpp"

namespace shaforge::cli {

namespace {

constexpr int kOk = 0;
constexpr int kVerificationFailed = 1;
constexpr int kUsage = 2;
constexpr int kExhausted = 3;

struct CommonOpts {
    std::string fixture_path;
    std::string curve_id;
    unsigned long seed = 1;
    construct::Bounds bounds;
    unsigned long probe_places = 0;  // fit-constants: probe only this many support places
    bool audit = false;
    std::string out_path;
    unsigned r = 1;
    std::string in_path;
    long n = 2;
    std::string gamma_spec = "2";
};

void add_fixture_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--fixture", o.fixture_path, "fixture file path")->required();
    cmd->add_option("--curve", o.curve_id, "fixture record id")->required();
}

void add_bound_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--seed", o.seed, "sampling seed, recorded in the output");
    cmd->add_option("--bound-prime-search", o.bounds.prime_search,
                    "cap for norm-prime and fresh-place searches");
    cmd->add_option("--bound-d-search", o.bounds.d_search, "cap on |d| in the extension search");
    cmd->add_option("--bound-local-samples", o.bounds.local_samples,
                    "local-image saturation budget");
    cmd->add_option("--bound-trial-limit", o.bounds.factor.trial_limit,
                    "trial-division limit before Pollard rho");
    cmd->add_option("--bound-rho-iters", o.bounds.factor.rho_iters, "Pollard rho iteration cap");
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw Error("cannot open output file " + out_path);
    f << text;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<long> parse_gamma_spec(const std::string& s) {
    std::vector<long> orders;
    size_t pos = 0;
    for (;;) {
        size_t x = s.find('x', pos);
        std::string tok = s.substr(pos, x == std::string::npos ? std::string::npos : x - pos);
        if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
            throw ParseError("gamma spec must look like \"2\", \"2x2\", \"3x3\"");
        orders.push_back(std::stol(tok));
        if (x == std::string::npos) break;
        pos = x + 1;
    }
    long total = 1;
    for (long o : orders) {
        if (o < 1) throw ParseError("gamma factors must be positive");
        total *= o;
    }
    if (total > 9) throw ParseError("group order must be at most 9, got " + std::to_string(total));
    return orders;
}

struct FitResult {
    curve::Fixture fx;
    curve::DescentImage image;
    obstruction::ObstructionConstants k;
    size_t full_support_size;
    bool truncated;
};

FitResult fit_pipeline(const CommonOpts& o) {
    curve::Fixture fx = curve::load_fixture(o.fixture_path, o.curve_id);
    curve::DescentImage image = curve::global_image(fx.curve, fx.basis);
    std::vector<localfield::Place> probe = fx.curve.discriminant_support(o.bounds.factor);
    size_t full = probe.size();
    bool truncated = o.probe_places > 0 && o.probe_places < probe.size();
    if (truncated) probe.resize(o.probe_places);
    std::vector<curve::LocalImage> locals;
    for (const auto& v : probe)
        locals.push_back(curve::local_image(fx.curve, v, o.seed, o.bounds.local_samples));
    obstruction::ObstructionConstants k =
        obstruction::fit_constants(fx.curve, fx.basis, probe, &image, &locals, !truncated);
    return FitResult{std::move(fx), std::move(image), std::move(k), full, truncated};
}

void run_audit(const curve::Fixture& fx, const std::vector<arith::KummerPair>& classes,
               const arith::FactorBounds& fb) {
    for (const auto& cls : classes) {
        auto places = construct::audit_good_places(fx.curve, cls, 5, fb);
        std::cerr << "audit: class " << cls.str() << " locally trivial at";
        for (const auto& v : places) std::cerr << " " << v.str();
        std::cerr << "\n";
    }
}

int cmd_verify_theta(const CommonOpts& o) {
    if (o.n != 2 && o.n != 3) throw ParseError("--n must be 2 or 3");
    theta::FiniteAbelianGroup gamma{parse_gamma_spec(o.gamma_spec)};
    long count = theta::verify_all(o.n, gamma);
    std::ostringstream out;
    out << "n=" << o.n << " Gamma=" << o.gamma_spec << ": " << count
        << " (eta, chi) decompositions verified, all cases pass\n";
    write_output(out.str(), o.out_path);
    return kOk;
}

int cmd_fit_constants(const CommonOpts& o) {
    FitResult fit = fit_pipeline(o);
    if (fit.truncated)
        std::cerr << "warning: probing only " << o.probe_places << " of " << fit.full_support_size
                  << " support places; survivors below may exceed one image-shift orbit\n";

    std::ostringstream out;
    out << "curve " << fit.fx.curve.str() << "\n";
    out << "descent image order " << fit.image.elements.size() << "\n";
    out << "probed places:";
    for (const auto& v : fit.k.fitted_support) out << " " << v.str();
    out << "\n";
    out << "constants: c1=" << fit.k.c1.str() << " c2=" << fit.k.c2.str() << "\n";
    out << "survivors (" << fit.k.surviving.size() << "), shift vs primary:\n";
    for (const auto& s : fit.k.surviving) {
        arith::KummerPair shift{fit.k.c1 * s.first, fit.k.c2 * s.second};
        out << "  " << s.str() << "  shift " << shift.str()
            << (fit.image.contains(shift) ? "  [in image]" : "  [NOT in image]") << "\n";
    }
    write_output(out.str(), o.out_path);
    return kOk;
}

int cmd_forge(const CommonOpts& o) {
    FitResult fit = fit_pipeline(o);
    construct::ForgedGroup g =
        construct::forge_group(fit.fx.curve, fit.fx.basis, fit.k, o.r, o.bounds);
    if (o.audit) run_audit(fit.fx, g.generators, o.bounds.factor);
    certio::RunStamp stamp{o.seed, o.bounds};
    write_output(certio::dump(certio::forged_group_to_json(fit.fx, fit.k, g, stamp)), o.out_path);
    return kOk;
}

int cmd_grow_sha(const CommonOpts& o) {
    FitResult fit = fit_pipeline(o);
    construct::ShaCertificateData data =
        construct::grow_sha(fit.fx.curve, fit.fx.basis, fit.k, o.r, o.bounds);
    if (o.audit) {
        std::vector<arith::KummerPair> classes;
        for (const auto& cw : data.classes) classes.push_back(cw.cls);
        run_audit(fit.fx, classes, o.bounds.factor);
    }
    certio::RunStamp stamp{o.seed, o.bounds};
    write_output(certio::dump(certio::sha_to_json(fit.fx, fit.k, data, stamp)), o.out_path);
    return kOk;
}

int cmd_verify_certificate(const CommonOpts& o) {
    certio::json doc = certio::parse_document(read_file(o.in_path));
    curve::Fixture fx = curve::load_fixture(o.fixture_path, o.curve_id);
    certio::verify_certificate(doc, fx);
    write_output("certificate accepted\n", o.out_path);
    return kOk;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"forges period-2 index-4 curve classes and certifies 2-part Sha growth"};
    app.require_subcommand(1);
    CommonOpts o;

    CLI::App* theta_cmd =
        app.add_subcommand("verify-theta", "exhaustively check the coboundary closed formula");
    theta_cmd->add_option("--n", o.n, "scalar modulus (2 or 3)")->required();
    theta_cmd->add_option("--gamma", o.gamma_spec, "group shape, e.g. 2, 2x2, 3, 3x3")->required();
    theta_cmd->add_option("--out", o.out_path, "write the report here instead of stdout");

    CLI::App* fit_cmd =
        app.add_subcommand("fit-constants", "fit the obstruction constants on a fixture curve");
    add_fixture_flags(fit_cmd, o);
    add_bound_flags(fit_cmd, o);
    fit_cmd->add_option("--bound-probe-places", o.probe_places,
                        "probe only this many support places (diagnostic; 0 = all)");
    fit_cmd->add_option("--out", o.out_path, "write the report here instead of stdout");

    CLI::App* forge_cmd =
        app.add_subcommand("forge", "forge r independent index-4 classes with certificates");
    add_fixture_flags(forge_cmd, o);
    add_bound_flags(forge_cmd, o);
    forge_cmd->add_option("--r", o.r, "number of independent classes")->required();
    forge_cmd->add_flag("--audit", o.audit, "sample good places and verify local triviality");
    forge_cmd->add_option("--out", o.out_path, "write the certificate here instead of stdout");

    CLI::App* sha_cmd = app.add_subcommand(
        "grow-sha", "build a quadratic field with certified 2-part Sha growth of dimension r");
    add_fixture_flags(sha_cmd, o);
    add_bound_flags(sha_cmd, o);
    sha_cmd->add_option("--r", o.r, "requested growth dimension")->required();
    sha_cmd->add_flag("--audit", o.audit, "sample good places and verify local triviality");
    sha_cmd->add_option("--out", o.out_path, "write the certificate here instead of stdout");

    CLI::App* verify_cmd = app.add_subcommand(
        "verify-certificate", "independently re-verify an emitted certificate document");
    add_fixture_flags(verify_cmd, o);
    verify_cmd->add_option("--in", o.in_path, "certificate JSON path")->required();
    verify_cmd->add_option("--out", o.out_path, "write the verdict here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (theta_cmd->parsed()) return cmd_verify_theta(o);
        if (fit_cmd->parsed()) return cmd_fit_constants(o);
        if (forge_cmd->parsed()) return cmd_forge(o);
        if (sha_cmd->parsed()) return cmd_grow_sha(o);
        if (verify_cmd->parsed()) return cmd_verify_certificate(o);
        return kUsage;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const SearchExhausted& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExhausted;
    } catch (const FactorizationLimitExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExhausted;
    } catch (const PoolExhausted& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExhausted;
    } catch (const NoCompatibleD& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExhausted;
    } catch (const SaturationFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExhausted;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kVerificationFailed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kVerificationFailed;
    }
}

}  // namespace shaforge::cli
