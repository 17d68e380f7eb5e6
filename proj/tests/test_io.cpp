#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "pdi/io.hpp"

using namespace pdi;

TEST(Io, FormatNumberRoundTrips) {
    for (double v : {0.1, 1.0 / 3.0, 6232.415519721812, -1e-300, 1e300}) {
        EXPECT_EQ(std::strtod(format_number(v).c_str(), nullptr), v);
    }
}

TEST(Io, CsvCarriesStampAndConfig) {
    std::ostringstream os;
    CsvWriter w(os, json{{"trace", {{"X", 10}}}}, {"a", "b"});
    w.row({1.0, 2.5});
    EXPECT_EQ(w.rows(), 1u);
    EXPECT_EQ(os.str(), "# tool: pdi\n# version: " + std::string(tool_version) +
                            "\n# config: {\"trace\":{\"X\":10}}\na,b\n1,2.5\n");
    EXPECT_THROW(w.row({1.0}), precondition_error);
}

TEST(Io, WitnessStreamShape) {
    Witness w{};
    w.p = {3, 5, 7, 11};
    w.form_value = 26.0;
    w.distance = 0.0;
    w.multiplicity = 24;
    for (int i = 0; i < 4; ++i) w.shifted[i] = classify_shifted(w.p[i], 3.0);
    std::ostringstream os;
    write_witness_stream(os, json{{"search", {{"c", 1.0}}}}, {w}, json{{"solutions", 1}});
    std::istringstream in(os.str());
    std::string a, b, c, d;
    std::getline(in, a);
    std::getline(in, b);
    std::getline(in, c);
    EXPECT_FALSE(std::getline(in, d));
    EXPECT_EQ(json::parse(a)["type"], "header");
    EXPECT_EQ(json::parse(a)["config"]["search"]["c"], 1.0);
    const auto wj = json::parse(b);
    EXPECT_EQ(wj["type"], "witness");
    EXPECT_EQ(wj["p4"], 11);
    EXPECT_EQ(wj["shifted"][1]["n"], 7);
    EXPECT_EQ(json::parse(c)["type"], "summary");
}

TEST(Io, ParamsReportFields) {
    const auto j = to_json(derive_params(1.005, 3.0 * std::pow(1e4, 1.005)));
    EXPECT_EQ(j["h"], 32);
    EXPECT_EQ(j["D_exponent"]["rational"], "989/11000");
    EXPECT_TRUE(j["beta_exceeds_one_33rd"].get<bool>());
}

TEST(Io, WeightsCsvListsUnion) {
    const auto plus = build_rosser(100.0, 10.0, SieveSign::plus);
    const auto minus = build_rosser(100.0, 10.0, SieveSign::minus);
    std::ostringstream os;
    write_weights_csv(os, json::object(), plus, minus);
    std::istringstream in(os.str());
    std::string l;
    std::size_t rows = 0;
    bool saw_one = false;
    while (std::getline(in, l)) {
        if (l[0] == '#' || l[0] == 'd') continue;
        ++rows;
        if (l.rfind("1,1,1,1", 0) == 0) saw_one = true;
    }
    EXPECT_TRUE(saw_one);
    EXPECT_GE(rows, std::max(plus.entries().size(), minus.entries().size()));
}
