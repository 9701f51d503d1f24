#include <fstream>
#include <sstream>

#include "doctest.h"
#include "lattice_chamfer/image_io.hpp"

using namespace lc;

namespace {

std::string fixture(const std::string& name) { return std::string(LC_FIXTURES) + "/" + name; }

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

std::string serialize(const GridImage& img, Encoding e) {
    std::ostringstream s;
    write_image(s, img, e);
    return s.str();
}

std::size_t count_if_box(const std::vector<Int>& dims, auto pred) {
    std::size_t n = 0;
    for (Int x = 0; x < dims[0]; ++x)
        for (Int y = 0; y < dims[1]; ++y)
            for (Int z = 0; z < dims[2]; ++z) n += pred(x, y, z);
    return n;
}

}  // namespace

TEST_SUITE("image_io") {

TEST_CASE("canonical fixtures re-serialize byte-identically") {
    for (const char* f : {"leaky_box.ldt", "wedge_support.ldt", "bordered_box.ldt"}) {
        CAPTURE(f);
        std::ostringstream s;
        write_image(s, read_image(fixture(f)), Encoding::Ascii);
        CHECK(s.str() == slurp(fixture(f)));
    }
    for (const char* f : {"leaky_box_unsafe_map.ldt", "wedge_support_map.ldt", "bordered_box_map.ldt"}) {
        CAPTURE(f);
        std::ostringstream s;
        write_map(s, read_map(fixture(f)), Encoding::Ascii);
        CHECK(s.str() == slurp(fixture(f)));
    }
}

TEST_CASE("round trips on every lattice and encoding") {
    for (const auto& l : {Lattice::Zn(2), Lattice::Zn(3), Lattice::bcc(), Lattice::fcc(),
                          Lattice::custom({{1, 1}, {2, -1}}, {1.0, 0.5})}) {
        CAPTURE(l.name());
        const std::vector<Int> dims = l.dim() == 2 ? std::vector<Int>{9, 7} : std::vector<Int>{6, 5, 4};
        auto img = synth_random(l, dims, 0.3, 11);
        for (auto e : {Encoding::Ascii, Encoding::Binary}) {
            const std::string s = serialize(img, e);
            std::istringstream in(s);
            const auto back = read_image(in);
            CHECK(back.cells() == img.cells());
            CHECK(back.lattice().name() == l.name());
            CHECK(back.lattice().spacing() == l.spacing());
            CHECK(serialize(back, e) == s);
        }
    }
}

TEST_CASE("distance maps keep scale and sentinels") {
    DistanceMap m{Grid(Lattice::bcc(), {4, 4, 4}), {}, 0.119};
    m.values.assign(m.grid.slots(), kOutside);
    std::uint32_t v = 0;
    for (std::size_t i = 0; i < m.values.size(); ++i)
        if (m.grid.member(i)) m.values[i] = (v++ % 5 == 0) ? kInfinity : v * 1000003u;
    for (auto e : {Encoding::Ascii, Encoding::Binary}) {
        std::ostringstream s;
        write_map(s, m, e);
        CHECK(s.str().find("scale 0.119\n") != std::string::npos);
        std::istringstream in(s.str());
        const auto back = read_map(in);
        CHECK(back == m);
        CHECK(back.scale == doctest::Approx(0.119));
    }
}

TEST_CASE("payload length equals the member count") {
    const std::vector<Int> dims{7, 6, 5};
    const auto img = synth_random(Lattice::bcc(), dims, 0.5, 1);
    const auto bin = serialize(img, Encoding::Binary);
    const std::size_t header = bin.find("data binary\n") + std::string("data binary\n").size();
    const std::size_t members =
        count_if_box(dims, [](Int x, Int y, Int z) { return (x - y) % 2 == 0 && (y - z) % 2 == 0; });
    CHECK(bin.size() - header == 4 * members);
    CHECK(img.grid().member_count() == members);
}

TEST_CASE("malformed files are rejected") {
    auto bad = [](const std::string& text) {
        std::istringstream in(text);
        CHECK_THROWS_AS(read_image(in), Error);
    };
    bad("LDT2\nlattice Z2\ndims 1 1\nspacing 1 1\ndata ascii\n0 0 0\n");
    bad("LDT1\nlattice Q7\ndims 1 1\nspacing 1 1\ndata ascii\n0 0 0\n");
    bad("LDT1\nlattice Z2\ndims 0 1\nspacing 1 1\ndata ascii\n");
    bad("LDT1\nlattice Z2\ndims 1 1\nspacing 1 -1\ndata ascii\n0 0 0\n");
    bad("LDT1\nlattice Z2\ndims 2 1\nspacing 1 1\ndata ascii\n0 0 0\n");                  // short
    bad("LDT1\nlattice Z2\ndims 1 1\nspacing 1 1\ndata ascii\n0 0 0\n0 0 1\n");           // long
    bad("LDT1\nlattice Z2\ndims 2 1\nspacing 1 1\ndata ascii\n1 0 0\n0 0 0\n");           // order
    bad("LDT1\nlattice Z2\ndims 1 1\nspacing 1 1\ndata ascii\n0 0 7\n");                  // value
    bad("LDT1\nlattice Z2\ndims 1 1\nspacing 1 1\ndata gzip\n0 0 0\n");
    bad("LDT1\nlattice Z3\ndims 1 1\nspacing 1 1\ndata ascii\n0 0 0\n");
    bad("LDT1\nlattice custom\ndims 1 1\nspacing 1 1\ndata ascii\n0 0 0\n");
    std::istringstream odd("LDT1\nlattice FCC\ndims 2 1 1\nspacing 1 1 1\ndata ascii\n1 0 0 1\n");
    try {
        read_image(odd);
        FAIL("non-member accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotALatticePoint);
    }
}

TEST_CASE("custom lattice header") {
    const std::string text =
        "LDT1\nlattice custom\ngenerator 1 1\ngenerator 2 -1\ndims 4 1\nspacing 1 1\ndata ascii\n0 0 1\n3 0 0\n";
    std::istringstream in(text);
    const auto img = read_image(in);
    CHECK(img.lattice().covolume() == 3);
    CHECK(img.at({3, 0}) == kBackground);
    CHECK(serialize(img, Encoding::Ascii) == text);
}

TEST_CASE("single-point synthesis") {
    const auto img = synth_single_point(Lattice::Zn(2), {9, 9});
    CHECK(img.count(kBackground) == 1);
    CHECK(img.at({4, 4}) == kBackground);
    const auto bordered = synth_single_point(Lattice::Zn(2), {9, 9}, {true, 1});
    CHECK(bordered.count(kBackground) == 1 + 32);
    for (Int i = 0; i < 9; ++i) {
        CHECK(bordered.at({i, 0}) == kBackground);
        CHECK(bordered.at({0, i}) == kBackground);
    }
    CHECK(bordered.at({1, 1}) == kForeground);
    const auto f = synth_single_point(Lattice::fcc(), {8, 8, 8});
    CHECK(f.count(kBackground) == 1);
    CHECK(f.at({4, 4, 4}) == kBackground);
}

TEST_CASE("random synthesis is reproducible") {
    const auto a = synth_random(Lattice::fcc(), {10, 9, 8}, 0.5, 42);
    const auto b = synth_random(Lattice::fcc(), {10, 9, 8}, 0.5, 42);
    const auto c = synth_random(Lattice::fcc(), {10, 9, 8}, 0.5, 43);
    CHECK(a.cells() == b.cells());
    CHECK(a.cells() != c.cells());
    const double frac = double(a.count(kBackground)) / double(a.grid().member_count());
    CHECK(frac > 0.4);
    CHECK(frac < 0.6);
    CHECK(synth_random(Lattice::Zn(2), {5, 5}, 0.0, 1).count(kBackground) == 0);
    CHECK(synth_random(Lattice::Zn(2), {5, 5}, 1.0, 1).count(kBackground) == 25);
    CHECK_THROWS_AS(synth_random(Lattice::Zn(2), {5, 5}, 1.5, 1), Error);
}

TEST_CASE("box phantom foreground count") {
    for (const auto& l : {Lattice::Zn(3), Lattice::bcc(), Lattice::fcc()}) {
        CAPTURE(l.name());
        const std::vector<Int> dims{13, 10, 9};
        const auto img = synth_box_phantom(l, dims);
        // Per-axis ranges [d/4, d-1-d/4]: 13 -> [3,9], 10 -> [2,7], 9 -> [2,6].
        const std::size_t expected = count_if_box(dims, [&](Int x, Int y, Int z) {
            return x >= 3 && x <= 9 && y >= 2 && y <= 7 && z >= 2 && z <= 6 && l.contains({x, y, z});
        });
        CHECK(img.count(kForeground) == expected);
        if (l.kind() == Lattice::Kind::Z) CHECK(expected == 7 * 6 * 5);
    }
}

TEST_CASE("csv export") {
    const auto m = read_map(fixture("wedge_support_map.ldt"));
    std::ostringstream s;
    write_csv(s, m);
    std::istringstream in(s.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "x,y,value");
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    std::size_t support = 0;
    for (auto v : m.values) support += v != kOutside;
    CHECK(rows == support);
    CHECK(s.str().find("\n2,4,0\n") != std::string::npos);
}

}
