#include "confmodel/io.hpp"

#include <gtest/gtest.h>

using namespace confmodel;

namespace {

std::string sample(const std::string& name) { return std::string(SAMPLES_DIR) + "/" + name; }

std::string error_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const InputError& e) {
        return e.what();
    }
    return "";
}

bool same_algebra(const PdAlgebra& A, const PdAlgebra& B) {
    if (A.dim() != B.dim() || A.n() != B.n()) return false;
    for (int i = 0; i < A.dim(); ++i) {
        if (A.degree(i) != B.degree(i) || A.eps(i) != B.eps(i) || A.d(i) != B.d(i)) return false;
        for (int j = 0; j < A.dim(); ++j)
            if (A.mul(i, j) != B.mul(i, j)) return false;
    }
    return true;
}

}  // namespace

TEST(AlgebraFiles, SamplesMatchBuiltins) {
    EXPECT_TRUE(same_algebra(load_algebra_file(sample("sphere2.json")), sphere(2)));
    EXPECT_TRUE(same_algebra(load_algebra_file(sample("cp2.json")), complex_projective(2)));
    EXPECT_TRUE(same_algebra(load_algebra_file(sample("fat_sphere3.json")), builtin("fat_sphere3")));
}

TEST(AlgebraFiles, TorusHasVanishingEulerCharacteristic) {
    auto T = load_algebra_file(sample("torus2.json"));
    EXPECT_EQ(T.euler(), 0);
    EXPECT_EQ(T.cohomology(), (Poly{{{0, 1}, {1, 2}, {2, 1}}}));
    // b·a = -ab filled in from the listed a·b
    EXPECT_EQ(T.mul(2, 1), (AVec{{3, -1}}));
    EXPECT_TRUE(check_diagonal(T).ok());
}

TEST(AlgebraFiles, DegeneratePairingIsReported) {
    auto msg = error_of([] { load_algebra_file(sample("broken.json")); });
    EXPECT_NE(msg.find("not a Poincaré duality algebra"), std::string::npos) << msg;
    EXPECT_NE(msg.find("pairing A^0 x A^2 is degenerate"), std::string::npos) << msg;
    // structure-only loading still works
    EXPECT_EQ(load_algebra_data(sample("broken.json")).names.size(), 2u);
}

TEST(AlgebraFiles, SyntaxErrorHasPosition) {
    auto msg = error_of([] { load_algebra_file(sample("truncated.json")); });
    EXPECT_NE(msg.find("JSON syntax error at line 6"), std::string::npos) << msg;
    EXPECT_EQ(msg.find("parse error at line"), std::string::npos) << msg;
    EXPECT_NE(error_of([] { load_algebra_file(sample("missing.json")); }).find("cannot open"), std::string::npos);
}

TEST(AlgebraFiles, StructuralErrors) {
    json base = algebra_to_json(sphere(2));
    auto with = [&](const std::function<void(json&)>& f) {
        json j = base;
        f(j);
        return error_of([&] { algebra_from_json(j); });
    };
    EXPECT_NE(with([](json& j) { j["pairing"][0][0] = "w"; }).find("unknown basis element 'w'"), std::string::npos);
    EXPECT_NE(with([](json& j) { j["version"] = 2; }).find("unsupported version"), std::string::npos);
    EXPECT_NE(with([](json& j) { j["format"] = "other"; }).find("expected \"confmodel-algebra\""), std::string::npos);
    EXPECT_NE(with([](json& j) { j.erase("n"); }).find("'n'"), std::string::npos);
    EXPECT_NE(with([](json& j) { j["pairing"][0][1] = "1/0"; }).find("coefficient"), std::string::npos);
    EXPECT_NE(with([](json& j) { j["basis"].push_back({{"name", "v"}, {"degree", 2}}); }).find("duplicate name"),
              std::string::npos);
    base = algebra_to_json(complex_projective(2));
    ASSERT_FALSE(base["products"].empty());
    EXPECT_NE(with([](json& j) { j["products"].push_back(j["products"][0]); }).find("listed twice"), std::string::npos);
    EXPECT_NE(with([](json& j) { j["products"][0]["value"] = json::array({json::array({"1", 1})}); })
                  .find("not homogeneous"),
              std::string::npos);
}

TEST(AlgebraFiles, RationalCoefficients) {
    json j = algebra_to_json(sphere(2));
    j["pairing"][0][1] = "3/2";
    auto A = algebra_from_json(j);
    EXPECT_EQ(A.eps(1), Rational(3, 2));
    EXPECT_EQ(A.diagonal(), (TensorElement{{{0, 1}, Rational(2, 3)}, {{1, 0}, Rational(2, 3)}}));
}

TEST(AlgebraFiles, RoundTrip) {
    for (const auto& A : {sphere(3), complex_projective(3), builtin("fat_sphere3"), builtin("product:sphere:2,sphere:3")}) {
        json j = algebra_to_json(A);
        auto B = algebra_from_json(json::parse(j.dump()));
        EXPECT_TRUE(same_algebra(A, B)) << A.name();
        EXPECT_EQ(algebra_to_json(B), j);
    }
}

TEST(LieFiles, LoadAndValidate) {
    auto aff = load_lie_file(sample("affine.json"));
    EXPECT_EQ(aff.br(0, 1), affine_lie().br(0, 1));
    EXPECT_EQ(aff.br(1, 0), affine_lie().br(1, 0));
    auto h = load_lie_file(sample("heisenberg.json"));
    EXPECT_EQ(h.dim(), 3);
    EXPECT_EQ(ce_homology(point(), h, 3).homology, (Poly{{{-3, 1}, {-2, 2}, {-1, 2}, {0, 1}}}));
    auto msg = error_of([] { load_lie_file(sample("not_jacobi.json")); });
    EXPECT_NE(msg.find("Jacobi fails on (x,y,z)"), std::string::npos) << msg;
    EXPECT_NE(error_of([] { load_lie_file(sample("sphere2.json")); }).find("expected \"confmodel-lie\""),
              std::string::npos);
}

TEST(ReportJson, PolynomialAndMatrixEncoding) {
    Poly p{{{-1, 2}, {3, 1}}};
    EXPECT_EQ(poly_json(p).dump(), "[[-1,2],[3,1]]");
    EXPECT_EQ(poly_from_json(poly_json(p)), p);
    SparseMatrix m(2, 2);
    m.add(1, 0, Rational(1, 2));
    m.add(0, 1, -3);
    EXPECT_EQ(matrix_json(m).dump(), R"({"rows":2,"cols":2,"entries":[[0,1,"-3"],[1,0,"1/2"]]})");
}

TEST(ReportJson, EnvelopeAndText) {
    json r = make_report({"ls", "betti"}, {{"algebra", "sphere:3"}, {"k", 3}});
    r["results"]["betti"] = poly_json(ls_betti(sphere(3), 3));
    r["results"]["d_squared_zero"] = true;
    EXPECT_EQ(r["schema"], "confmodel-report");
    EXPECT_EQ(r["schema_version"], kReportSchemaVersion);
    std::string t = render_text(r);
    EXPECT_NE(t.find("command: ls betti"), std::string::npos) << t;
    EXPECT_NE(t.find("betti: 1 + t^2 + t^3 + t^5"), std::string::npos) << t;
    EXPECT_NE(t.find("d_squared_zero: true"), std::string::npos) << t;
    EXPECT_NE(t.find("status: PASS"), std::string::npos) << t;
    EXPECT_EQ(t.find("time:"), std::string::npos);
    r["pass"] = false;
    r["timing"]["seconds"] = 0.5;
    t = render_text(r);
    EXPECT_NE(t.find("status: FAIL"), std::string::npos);
    EXPECT_NE(t.find("time: 0.5 s"), std::string::npos);
}
