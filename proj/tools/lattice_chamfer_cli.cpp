// lattice-chamfer: command-line front end for masks, weights, transforms and balls.

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "lattice_chamfer/dt_engine.hpp"
#include "lattice_chamfer/image_io.hpp"
#include "lattice_chamfer/presets.hpp"
#include "lattice_chamfer/weight_opt.hpp"

using namespace lc;

namespace {

struct MaskArgs {
    std::string lattice;
    std::string lattice_file;
    std::string mask_file;
    std::string vectors;
    std::vector<Int> weights;
};

void add_mask_options(CLI::App* app, MaskArgs& a) {
    auto* l = app->add_option("--lattice", a.lattice, "Z2, Z3, BCC or FCC");
    l->excludes(app->add_option("--lattice-file", a.lattice_file, "custom lattice definition file"));
    app->add_option("--mask", a.mask_file, "mask file (`v... : w` per line)");
    app->add_option("--vectors", a.vectors, "preset (bcc1..4, fcc1..4, z2-4/8/16, z3-6/18/26), or vectors `-1,0;-1,1` closed under negation");
    app->add_option("--weights", a.weights, "one weight per class")->delimiter(',');
}

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

Lattice resolve_lattice(const MaskArgs& a) {
    if (!a.lattice_file.empty()) return read_lattice_file(a.lattice_file);
    if (!a.lattice.empty()) return Lattice::by_name(a.lattice);
    if (!a.vectors.empty() && a.vectors.find(',') == std::string::npos)
        return Lattice::by_name(preset(a.vectors).lattice);
    throw CLI::ValidationError("--lattice", "a lattice is required");
}

std::string default_preset(const Lattice& l, std::size_t classes) {
    if (l.kind() == Lattice::Kind::BCC || l.kind() == Lattice::Kind::FCC) return lower(l.name()) + std::to_string(classes);
    static const char* z2[] = {"z2-4", "z2-8", "z2-16"};
    static const char* z3[] = {"z3-6", "z3-18", "z3-26"};
    if (l.kind() == Lattice::Kind::Z && classes >= 1 && classes <= 3) {
        if (l.dim() == 2) return z2[classes - 1];
        if (l.dim() == 3) return z3[classes - 1];
    }
    throw CLI::ValidationError("--vectors", "no default mask for this lattice; pass --mask or --vectors");
}

std::vector<IVec> parse_vectors(const std::string& s) {
    std::vector<IVec> reps;
    std::stringstream in(s);
    for (std::string item; std::getline(in, item, ';');) {
        IVec v;
        std::stringstream is(item);
        for (std::string x; std::getline(is, x, ',');) v.push_back(std::stoll(x));
        reps.push_back(v);
    }
    return reps;
}

// Mask geometry with the requested weights (unit weights when none are given).
ChamferMask resolve_mask(const MaskArgs& a) {
    const Lattice l = resolve_lattice(a);
    if (!a.mask_file.empty()) {
        auto m = read_mask_file(l, a.mask_file);
        return a.weights.empty() ? m : m.with_weights(a.weights);
    }
    std::string v = a.vectors;
    if (v.empty()) v = default_preset(l, a.weights.empty() ? 1 : a.weights.size());
    std::vector<Int> w = a.weights;
    if (v.find(',') != std::string::npos) {
        const auto vs = parse_vectors(v);
        if (w.empty()) w.assign(vs.size(), 1);
        if (w.size() != vs.size()) throw CLI::ValidationError("--weights", "one weight per listed vector");
        std::vector<WeightedVector> e;
        for (std::size_t i = 0; i < vs.size(); ++i) e.push_back({vs[i], w[i]});
        return symmetric_closure(l, e);
    }
    return preset_mask(v, l, w);
}

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

// Three significant digits, matching the published tables.
std::string sig3(double x) {
    if (x <= 0) return fmt("%.3f", x);
    const int digits = std::max(0, 2 - static_cast<int>(std::floor(std::log10(x))));
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

std::string weights_str(const std::vector<double>& w, const char* f, const char* sep) {
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) s += (i ? sep : "") + fmt(f, w[i]);
    return s;
}

int cmd_mask_check(const MaskArgs& a) {
    const auto m = resolve_mask(a);
    const auto d = build_wedges(m);
    std::cout << "lattice " << m.lattice().name() << ", " << m.size() << " vectors, " << m.num_classes()
              << " weight classes\n";
    std::cout << "wedges " << d.wedges.size() << "\n";
    for (std::size_t i = 0; i < d.wedges.size(); ++i) {
        const auto& w = d.wedges[i];
        std::cout << "  " << i << ":";
        for (auto k : w.idx) std::cout << ' ' << to_string(m.vector(k));
        std::cout << "  Delta0=" << w.delta0 << "\n";
    }
    const auto r = check_convexity(m, d);
    std::cout << "convex " << (r.convex ? "yes" : "no") << "\n";
    auto list = [&](const char* label, const std::vector<std::size_t>& idx) {
        if (idx.empty()) return;
        std::cout << label;
        for (auto i : idx) std::cout << ' ' << to_string(m.vector(i)) << ':' << m.weight(i);
        std::cout << "\n";
    };
    list("offenders", r.offenders);
    list("redundant", r.redundant);
    if (!r.nonconvex_wedges.empty()) {
        std::cout << "nonconvex wedges";
        for (auto w : r.nonconvex_wedges) std::cout << ' ' << w;
        std::cout << "\n";
    }
    return r.convex ? 0 : 1;
}

int cmd_weights_optimize(const MaskArgs& a, const std::string& format) {
    const auto g = resolve_mask(a);
    const auto d = build_wedges(g);
    const auto r = optimize_real_weights(g, d);
    if (format == "csv") {
        std::cout << "weights,scale,error_pct,residual\n"
                  << weights_str(r.weights, "%.6f", ";") << ',' << fmt("%.6f", r.scale) << ','
                  << fmt("%.4f", 100 * r.error) << ',' << fmt("%.3g", r.residual) << "\n";
    } else {
        std::cout << "real weights " << weights_str(r.weights, "%.3f", " ") << "\n"
                  << "scale " << fmt("%.3f", r.scale) << "\n"
                  << "error% " << fmt("%.2f", 100 * r.error) << "\n";
    }
    return 0;
}

int cmd_weights_search(const MaskArgs& a, Int max_weight, double cutoff, int threads, const std::string& format) {
    const auto g = resolve_mask(a);
    const auto d = build_wedges(g);
    const auto rows = search_integer_weights(g, d, {max_weight, cutoff, threads});
    std::string head;
    for (int c = 0; c < g.num_classes(); ++c) head += "w" + std::to_string(c + 1) + (format == "csv" ? "," : " ");
    if (format == "csv") {
        std::cout << head << "scale,error_pct\n";
        for (const auto& r : rows)
            std::cout << weights_str(r.weights, "%.0f", ",") << ',' << fmt("%.6f", r.scale) << ','
                      << fmt("%.4f", 100 * r.error) << "\n";
    } else {
        std::cout << head << "scale error%\n";
        for (const auto& r : rows)
            std::cout << weights_str(r.weights, "%.0f", " ") << ' ' << sig3(r.scale) << ' '
                      << fmt("%.2f", 100 * r.error) << "\n";
    }
    return 0;
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

int cmd_dt(MaskArgs a, const std::string& in, const std::string& out, bool unsafe, const std::string& encoding) {
    const auto img = read_image(in);
    if (a.lattice.empty() && a.lattice_file.empty() && (a.vectors.empty() || a.vectors.find(',') != std::string::npos))
        a.lattice = img.lattice().name();
    auto m = resolve_mask(a);
    if (m.lattice().generators() != img.lattice().generators())
        throw Error(ErrorCode::DimensionMismatch, "mask lattice differs from the image lattice");
    m = ChamferMask(img.lattice(), m.vectors(), m.classes(), m.class_weights());
    const auto d = build_wedges(m);
    ValidationVerdict v;
    DistanceMap map = [&] {
        try {
            return compute_distance_map(img, m, d, unsafe, &v);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::InvalidImage) throw;
            for (const auto& p : v.foreground_border) std::cerr << "  foreground border point " << to_string(p) << "\n";
            for (const auto& p : v.leaking_steps) std::cerr << "  uncovered point " << to_string(p) << "\n";
            std::cerr << "rerun with --unsafe to compute anyway\n";
            throw;
        }
    }();
    if (m.dim() >= 2 && is_polytope_convex(m, d)) {
        std::vector<double> cw(m.class_weights().begin(), m.class_weights().end());
        const auto e = max_relative_error(m, d, cw);
        map.scale = optimal_scale_factor(e.rho_min, e.rho_max);
    }
    std::cout << "verdict " << to_string(v.kind) << (unsafe && v.kind == Verdict::Invalid ? " (unsafe)" : "") << "\n";
    std::size_t reached = 0, support = 0;
    std::uint32_t dmax = 0;
    for (auto x : map.values) {
        if (x == kOutside) continue;
        ++support;
        if (x != kInfinity) ++reached, dmax = std::max(dmax, x);
    }
    std::cout << "points " << support << ", finite " << reached << ", max " << dmax << "\n";
    if (!out.empty()) {
        if (ends_with(out, ".csv")) {
            std::ofstream f(out);
            write_csv(f, map);
        } else {
            write_map(out, map, encoding == "binary" ? Encoding::Binary : Encoding::Ascii);
        }
    }
    return 0;
}

int cmd_ball(const MaskArgs& a, Int radius, const std::string& out, const std::string& format) {
    const auto m = resolve_mask(a);
    const auto b = generate_ball(m, radius);
    std::ostringstream data;
    if (format == "ldt")
        write_map(data, b.map);
    else
        write_ball_csv(data, b);
    if (out.empty()) {
        std::cout << data.str();
    } else {
        std::ofstream f(out, std::ios::binary);
        f << data.str();
        std::cout << "ball radius " << radius << ": " << b.points.size() << " points\n";
    }
    return 0;
}

int cmd_verify(const MaskArgs& a, int count, std::uint64_t seed, Int size, double p, int threads) {
    const auto m = resolve_mask(a);
    Int border = 0;
    for (const auto& v : m.vectors())
        for (Int x : v) border = std::max(border, std::abs(x));
    int pass = 0, fail = 0;
    for (int i = 0; i < count; ++i) {
        const std::vector<Int> dims(m.dim(), size);
        const auto img = synth_random(m.lattice(), dims, p, seed + static_cast<std::uint64_t>(i), {true, border});
        const auto ts = chamfer_two_scan(img, m, make_scan_plan(m, img));
        const bool ok = ts == dijkstra_oracle(img, m) && ts == parallel_iterative_oracle(img, m, threads);
        (ok ? pass : fail)++;
        if (!ok) std::cout << "FAIL seed " << seed + static_cast<std::uint64_t>(i) << "\n";
    }
    std::cout << "verify " << m.lattice().name() << ": " << pass << " passed, " << fail << " failed\n";
    return fail == 0 ? 0 : 1;
}

int cmd_synth(const MaskArgs& a, const std::vector<Int>& dims, const std::string& kind, double p,
              std::uint64_t seed, bool border_bg, Int border, const std::string& out, const std::string& encoding) {
    const Lattice l = resolve_lattice(a);
    const SynthOptions opt{border_bg, border};
    GridImage img = kind == "single"   ? synth_single_point(l, dims, opt)
                    : kind == "random" ? synth_random(l, dims, p, seed, opt)
                                       : synth_box_phantom(l, dims, opt);
    const Encoding e = encoding == "binary" ? Encoding::Binary : Encoding::Ascii;
    if (out.empty())
        write_image(std::cout, img, e);
    else
        write_image(out, img, e);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Chamfer masks and distance transforms on Z^n, BCC and FCC lattices"};
    app.require_subcommand(1);
    std::string format = "table";
    int threads = 0;

    MaskArgs mask_a;
    auto* mask = app.add_subcommand("mask", "mask utilities");
    mask->require_subcommand(1);
    auto* check = mask->add_subcommand("check", "wedges, determinants and convexity of a mask");
    add_mask_options(check, mask_a);
    std::string mask_positional;
    check->add_option("file", mask_positional, "mask file");

    MaskArgs w_a;
    auto* weights = app.add_subcommand("weights", "weight optimization");
    weights->require_subcommand(1);
    auto* optimize = weights->add_subcommand("optimize", "minimax real weights");
    add_mask_options(optimize, w_a);
    optimize->add_option("--format", format)->check(CLI::IsMember({"table", "csv"}));
    auto* search = weights->add_subcommand("search", "Pareto table of integer weights");
    add_mask_options(search, w_a);
    Int max_weight = 20;
    double cutoff = 1.0;
    search->add_option("--max-weight", max_weight, "largest weight considered")->check(CLI::PositiveNumber);
    search->add_option("--max-error", cutoff, "discard tuples with a larger relative error");
    search->add_option("--format", format)->check(CLI::IsMember({"table", "csv"}));
    search->add_option("--threads", threads);

    MaskArgs dt_a;
    std::string in, out, encoding = "ascii";
    bool unsafe = false;
    auto* dt = app.add_subcommand("dt", "distance transform of an LDT1 image");
    add_mask_options(dt, dt_a);
    dt->add_option("--in", in)->required()->check(CLI::ExistingFile);
    dt->add_option("--out", out, "LDT1 map, or CSV when the name ends in .csv");
    dt->add_option("--encoding", encoding)->check(CLI::IsMember({"ascii", "binary"}));
    dt->add_flag("--unsafe", unsafe, "transform even when the image fails validation");

    MaskArgs ball_a;
    Int radius = 0;
    std::string ball_out, ball_format = "csv";
    auto* ball = app.add_subcommand("ball", "chamfer ball of a given radius");
    add_mask_options(ball, ball_a);
    ball->add_option("--radius", radius)->required();
    ball->add_option("--out", ball_out);
    ball->add_option("--format", ball_format)->check(CLI::IsMember({"csv", "ldt"}));

    MaskArgs v_a;
    int count = 100;
    std::uint64_t seed = 1;
    Int size = 16;
    double prob = 0.05;
    auto* verify = app.add_subcommand("verify", "two-scan versus oracles on random images");
    add_mask_options(verify, v_a);
    verify->add_option("--count", count)->check(CLI::PositiveNumber);
    verify->add_option("--seed", seed);
    verify->add_option("--size", size)->check(CLI::PositiveNumber);
    verify->add_option("--p", prob, "background probability")->check(CLI::Range(0.0, 1.0));
    verify->add_option("--threads", threads);

    MaskArgs s_a;
    std::vector<Int> dims;
    std::string kind = "random", synth_out, synth_enc = "ascii";
    bool border_bg = false;
    Int border = 1;
    auto* synth = app.add_subcommand("synth", "write a synthetic LDT1 image");
    add_mask_options(synth, s_a);
    synth->add_option("--dims", dims)->required()->delimiter(',');
    synth->add_option("--kind", kind)->check(CLI::IsMember({"single", "random", "box"}));
    synth->add_option("--p", prob)->check(CLI::Range(0.0, 1.0));
    synth->add_option("--seed", seed);
    synth->add_flag("--border-bg", border_bg, "force border points to background");
    synth->add_option("--border-width", border);
    synth->add_option("--out", synth_out);
    synth->add_option("--encoding", synth_enc)->check(CLI::IsMember({"ascii", "binary"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (check->parsed()) {
            if (!mask_positional.empty()) mask_a.mask_file = mask_positional;
            return cmd_mask_check(mask_a);
        }
        if (optimize->parsed()) return cmd_weights_optimize(w_a, format);
        if (search->parsed()) return cmd_weights_search(w_a, max_weight, cutoff, threads, format);
        if (dt->parsed()) return cmd_dt(dt_a, in, out, unsafe, encoding);
        if (ball->parsed()) return cmd_ball(ball_a, radius, ball_out, ball_format);
        if (verify->parsed()) return cmd_verify(v_a, count, seed, size, prob, threads);
        if (synth->parsed()) return cmd_synth(s_a, dims, kind, prob, seed, border_bg, border, synth_out, synth_enc);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
