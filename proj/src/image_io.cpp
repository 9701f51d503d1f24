#include "lattice_chamfer/image_io.hpp"

#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

namespace lc {

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::Parse, "LDT1: " + what); }

std::vector<std::string> tokens(const std::string& line) {
    std::istringstream s(line);
    std::vector<std::string> t;
    for (std::string w; s >> w;) t.push_back(w);
    return t;
}

std::vector<std::string> next_line(std::istream& in, const char* expected) {
    std::string line;
    if (!std::getline(in, line)) fail(std::string("missing `") + expected + "` line");
    auto t = tokens(line);
    if (t.empty() || t[0] != expected) fail(std::string("expected `") + expected + "`, got `" + line + "`");
    return t;
}

Int parse_int(const std::string& s) {
    std::size_t pos = 0;
    Int v = 0;
    try {
        v = std::stoll(s, &pos);
    } catch (const std::exception&) {
        fail("bad integer `" + s + "`");
    }
    if (pos != s.size()) fail("bad integer `" + s + "`");
    return v;
}

double parse_double(const std::string& s) {
    std::size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        fail("bad number `" + s + "`");
    }
    if (pos != s.size()) fail("bad number `" + s + "`");
    return v;
}

std::string lattice_id(const Lattice& l) { return l.kind() == Lattice::Kind::Custom ? "custom" : l.name(); }

std::string fmt_double(double x) {
    std::ostringstream s;
    s << std::setprecision(17) << x;
    // Shortest representation that round-trips.
    for (int p = 1; p <= 17; ++p) {
        std::ostringstream t;
        t << std::setprecision(p) << x;
        if (std::stod(t.str()) == x) return t.str();
    }
    return s.str();
}

}  // namespace

LdtContent read_ldt(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || tokens(line) != std::vector<std::string>{"LDT1"}) fail("missing magic `LDT1`");
    auto lt = next_line(in, "lattice");
    if (lt.size() != 2) fail("`lattice` takes one id");
    std::vector<IVec> gens;
    if (lt[1] == "custom") {
        for (;;) {
            const auto pos = in.tellg();
            if (!std::getline(in, line)) fail("truncated header");
            auto t = tokens(line);
            if (t.empty() || t[0] != "generator") {
                in.seekg(pos);
                break;
            }
            IVec g;
            for (std::size_t i = 1; i < t.size(); ++i) g.push_back(parse_int(t[i]));
            gens.push_back(std::move(g));
        }
        if (gens.empty()) fail("custom lattice without `generator` lines");
    }
    auto dt = next_line(in, "dims");
    std::vector<Int> dims;
    for (std::size_t i = 1; i < dt.size(); ++i) {
        dims.push_back(parse_int(dt[i]));
        if (dims.back() <= 0) fail("dims must be positive");
    }
    auto st = next_line(in, "spacing");
    std::vector<double> spacing;
    for (std::size_t i = 1; i < st.size(); ++i) {
        spacing.push_back(parse_double(st[i]));
        if (!(spacing.back() > 0)) fail("spacing must be positive");
    }
    if (spacing.size() != dims.size()) fail("spacing and dims differ in length");

    std::optional<double> scale;
    if (!std::getline(in, line)) fail("missing `data` line");
    auto t = tokens(line);
    if (!t.empty() && t[0] == "scale") {
        if (t.size() != 2) fail("`scale` takes one value");
        scale = parse_double(t[1]);
        if (!std::getline(in, line)) fail("missing `data` line");
        t = tokens(line);
    }
    if (t.size() != 2 || t[0] != "data" || (t[1] != "ascii" && t[1] != "binary"))
        fail("expected `data ascii|binary`");
    const Encoding enc = t[1] == "ascii" ? Encoding::Ascii : Encoding::Binary;

    Lattice lattice = lt[1] == "custom" ? Lattice::custom(gens, spacing) : Lattice::by_name(lt[1], spacing);
    if (static_cast<int>(dims.size()) != lattice.dim()) fail("dims do not match the lattice dimension");
    LdtContent c{ImageHeader{lattice, dims, enc, scale}, {}};
    const Grid grid(lattice, dims);
    c.values.assign(grid.slots(), kOutside);
    const std::size_t n = dims.size();

    if (enc == Encoding::Binary) {
        for (std::size_t i = 0; i < grid.slots(); ++i) {
            if (!grid.member(i)) continue;
            unsigned char b[4];
            if (!in.read(reinterpret_cast<char*>(b), 4)) fail("binary payload shorter than the member count");
            c.values[i] = std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 | std::uint32_t(b[2]) << 16 |
                          std::uint32_t(b[3]) << 24;
        }
        if (in.peek() != std::char_traits<char>::eof()) fail("binary payload longer than the member count");
        return c;
    }

    std::size_t next = 0;  // next expected slot
    auto advance = [&] {
        while (next < grid.slots() && !grid.member(next)) ++next;
    };
    advance();
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto f = tokens(line);
        if (f.empty()) continue;
        if (f.size() != n + 1) fail("payload line " + std::to_string(lineno) + ": expected coordinates and a value");
        IVec p(n);
        for (std::size_t k = 0; k < n; ++k) p[k] = parse_int(f[k]);
        if (!grid.in_box(p)) fail("payload point " + to_string(p) + " outside dims");
        if (!lattice.contains(p)) throw Error(ErrorCode::NotALatticePoint, "LDT1: payload point " + to_string(p) + " is not a " + lattice.name() + " point");
        const std::size_t idx = grid.index(p);
        if (idx != next) fail("payload point " + to_string(p) + " out of raster order");
        const Int v = parse_int(f[n]);
        if (v < 0 || v > Int(std::numeric_limits<std::uint32_t>::max())) fail("value out of range");
        c.values[idx] = static_cast<std::uint32_t>(v);
        ++next;
        advance();
    }
    if (next != grid.slots()) fail("payload shorter than the member count");
    return c;
}

void write_ldt(std::ostream& out, const ImageHeader& h, const std::vector<std::uint32_t>& values) {
    const Grid grid(h.lattice, h.dims);
    if (values.size() != grid.slots()) throw Error(ErrorCode::DimensionMismatch, "value count does not match dims");
    out << "LDT1\nlattice " << lattice_id(h.lattice) << '\n';
    if (h.lattice.kind() == Lattice::Kind::Custom)
        for (const auto& g : h.lattice.generators()) {
            out << "generator";
            for (Int x : g) out << ' ' << x;
            out << '\n';
        }
    out << "dims";
    for (Int d : h.dims) out << ' ' << d;
    out << "\nspacing";
    for (double s : h.lattice.spacing()) out << ' ' << fmt_double(s);
    out << '\n';
    if (h.scale) out << "scale " << fmt_double(*h.scale) << '\n';
    out << "data " << (h.encoding == Encoding::Ascii ? "ascii" : "binary") << '\n';
    IVec p(h.dims.size());
    for (std::size_t i = 0; i < grid.slots(); ++i) {
        if (!grid.member(i)) continue;
        const std::uint32_t v = values[i];
        if (h.encoding == Encoding::Binary) {
            const char b[4] = {char(v & 0xFF), char(v >> 8 & 0xFF), char(v >> 16 & 0xFF), char(v >> 24 & 0xFF)};
            out.write(b, 4);
        } else {
            grid.coords(i, p.data());
            for (Int x : p) out << x << ' ';
            out << v << '\n';
        }
    }
}

GridImage read_image(std::istream& in) {
    auto c = read_ldt(in);
    GridImage img(c.header.lattice, c.header.dims, kForeground);
    for (std::size_t i = 0; i < c.values.size(); ++i) {
        if (!img.grid().member(i)) continue;
        if (c.values[i] > kVoid)
            fail("image value " + std::to_string(c.values[i]) + " at " + to_string(img.grid().coords(i)) +
                 " (expected 0, 1 or 2)");
        img.set(i, static_cast<std::uint8_t>(c.values[i]));
    }
    return img;
}

GridImage read_image(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::Parse, "cannot open " + path);
    return read_image(f);
}

DistanceMap read_map(std::istream& in) {
    auto c = read_ldt(in);
    return DistanceMap{Grid(c.header.lattice, c.header.dims), std::move(c.values), c.header.scale.value_or(0)};
}

DistanceMap read_map(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::Parse, "cannot open " + path);
    return read_map(f);
}

void write_image(std::ostream& out, const GridImage& image, Encoding enc) {
    std::vector<std::uint32_t> v(image.cells().begin(), image.cells().end());
    write_ldt(out, ImageHeader{image.lattice(), image.dims(), enc, std::nullopt}, v);
}

void write_map(std::ostream& out, const DistanceMap& map, Encoding enc) {
    std::optional<double> scale;
    if (map.scale > 0) scale = map.scale;
    write_ldt(out, ImageHeader{map.grid.lattice(), map.grid.dims(), enc, scale}, map.values);
}

void write_image(const std::string& path, const GridImage& image, Encoding enc) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::Parse, "cannot write " + path);
    write_image(f, image, enc);
}

void write_map(const std::string& path, const DistanceMap& map, Encoding enc) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::Parse, "cannot write " + path);
    write_map(f, map, enc);
}

void write_csv(std::ostream& out, const DistanceMap& map) {
    const Grid& g = map.grid;
    out << (g.dim() == 2 ? "x,y,value\n" : g.dim() == 3 ? "x,y,z,value\n" : "coords,value\n");
    IVec p(g.dims().size());
    for (std::size_t i = 0; i < g.slots(); ++i) {
        if (map.values[i] == kOutside) continue;
        g.coords(i, p.data());
        for (Int x : p) out << x << ',';
        if (map.values[i] == kInfinity)
            out << "inf\n";
        else
            out << map.values[i] << '\n';
    }
}

void write_ball_csv(std::ostream& out, const Ball& ball) {
    const Grid& g = ball.map.grid;
    out << (g.dim() == 2 ? "x,y,value\n" : "x,y,z,value\n");
    for (const auto& p : ball.points) {
        for (Int x : p) out << x << ',';
        out << ball.map.at(add(p, ball.center)) << '\n';
    }
}

bool on_border(const Grid& grid, const IVec& p, Int border_width) {
    for (std::size_t k = 0; k < p.size(); ++k)
        if (p[k] < border_width || p[k] >= grid.dims()[k] - border_width) return true;
    return false;
}

namespace {

void apply_border(GridImage& img, const SynthOptions& opt) {
    if (!opt.border_background) return;
    const Grid& g = img.grid();
    for (std::size_t i = 0; i < g.slots(); ++i)
        if (g.member(i) && on_border(g, g.coords(i), opt.border_width)) img.set(i, kBackground);
}

}  // namespace

GridImage synth_single_point(const Lattice& lattice, const std::vector<Int>& dims, const SynthOptions& opt) {
    GridImage img(lattice, dims, kForeground);
    const Grid& g = img.grid();
    IVec c(dims.size());
    for (std::size_t k = 0; k < dims.size(); ++k) c[k] = dims[k] / 2;
    // Nearest member by Chebyshev distance, first in raster order on ties.
    std::size_t best = g.slots();
    Int best_d = std::numeric_limits<Int>::max();
    for (std::size_t i = 0; i < g.slots(); ++i) {
        if (!g.member(i)) continue;
        const IVec p = g.coords(i);
        Int d = 0;
        for (std::size_t k = 0; k < p.size(); ++k) d = std::max(d, std::abs(p[k] - c[k]));
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    if (best == g.slots()) throw Error(ErrorCode::InvalidImage, "box contains no lattice point");
    img.set(best, kBackground);
    apply_border(img, opt);
    return img;
}

GridImage synth_random(const Lattice& lattice, const std::vector<Int>& dims, double p, std::uint64_t seed,
                       const SynthOptions& opt) {
    if (!(p >= 0 && p <= 1)) throw Error(ErrorCode::Parse, "probability must lie in [0,1]");
    GridImage img(lattice, dims, kForeground);
    std::mt19937_64 rng(seed);
    // Raw engine output against a fixed threshold keeps images identical across standard libraries.
    const long double span = 18446744073709551616.0L;
    const std::uint64_t threshold =
        p >= 1 ? std::numeric_limits<std::uint64_t>::max() : static_cast<std::uint64_t>(p * span);
    for (std::size_t i = 0; i < img.grid().slots(); ++i) {
        if (!img.grid().member(i)) continue;
        const std::uint64_t r = rng();
        if (r < threshold || p >= 1) img.set(i, kBackground);
    }
    apply_border(img, opt);
    return img;
}

GridImage synth_box_phantom(const Lattice& lattice, const std::vector<Int>& dims, const SynthOptions& opt) {
    GridImage img(lattice, dims, kBackground);
    const Grid& g = img.grid();
    for (std::size_t i = 0; i < g.slots(); ++i) {
        if (!g.member(i)) continue;
        const IVec p = g.coords(i);
        bool inside = true;
        for (std::size_t k = 0; k < p.size(); ++k)
            inside = inside && p[k] >= dims[k] / 4 && p[k] <= dims[k] - 1 - dims[k] / 4;
        if (inside) img.set(i, kForeground);
    }
    apply_border(img, opt);
    return img;
}

}  // namespace lc
