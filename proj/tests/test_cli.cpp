#include "flowcast/cli.hpp"
#include "flowcast/model_io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using namespace flowcast;

namespace {

const std::string kData = FLOWCAST_DATA_DIR;

struct Run
{
    int code;
    std::string out;
    std::string err;
};

Run flowcast_cli(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name)
{
    const auto dir = fs::temp_directory_path() / ("flowcast_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), {}};
}

struct Pipeline
{
    fs::path dir;
    std::string schedule = kData + "/schedule.json";

    explicit Pipeline(const std::string& name) : dir(fresh_dir(name)) {}

    Run ingest()
    {
        return flowcast_cli({"ingest", "--schedule", schedule, "--counts", kData + "/counts_jul2014.csv", "--labels",
                             kData + "/labels.csv", "--weights", kData + "/weights.json", "--out",
                             (dir / "counts.csv").string()});
    }
    Run clean()
    {
        return flowcast_cli({"clean", "--schedule", schedule, "--counts", (dir / "counts.csv").string(), "--out",
                             (dir / "clean").string()});
    }
    std::string cleaned() const { return (dir / "clean" / "cleaned_counts.csv").string(); }
    Run group()
    {
        return flowcast_cli(
            {"group", "--schedule", schedule, "--counts", cleaned(), "--alpha", "0.05", "--out", (dir / "groups.json").string()});
    }
    Run fit()
    {
        return flowcast_cli({"fit", "--schedule", schedule, "--counts", cleaned(), "--groups",
                             (dir / "groups.json").string(), "--out", (dir / "models").string()});
    }
};

} // namespace

TEST_CASE("end-to-end pipeline reproduces the Mon-Thu reference coefficients")
{
    Pipeline p("pipeline");
    auto r = p.ingest();
    REQUIRE_MESSAGE(r.code == 0, r.err);
    CHECK(r.out.find("rows after calendar filter: 223") != std::string::npos);

    r = p.clean();
    REQUIRE_MESSAGE(r.code == 0, r.err);
    const auto report = nlohmann::json::parse(slurp(p.dir / "clean" / "quality_report.json"));
    CHECK(report.at("missing").size() == 1);
    CHECK(report.at("imputations").size() == 2);

    r = p.group();
    REQUIRE_MESSAGE(r.code == 0, r.err);
    CHECK(r.out.find("groups: Mon-Thu Fri Sat Sun") != std::string::npos);
    CHECK(nlohmann::json::parse(slurp(p.dir / "groups.json")).at("groups").size() == 4);

    r = p.fit();
    REQUIRE_MESSAGE(r.code == 0, r.err);
    CHECK(r.out.find("Adjusted R Square") != std::string::npos);
    CHECK(r.out.find("1963.58*t1 + 1014.81*t2 + 676.38*t3 + 776.13*t4 + 1124.06*t5 + 2476.88*t6 + 717.44*t7 + 522.69") !=
          std::string::npos);

    const auto model = load_model(p.dir / "models" / "model_Mon-Thu_outbound.json").model;
    CHECK(std::abs(model.fit.intercept - 522.6875) < 1e-6);
    const std::array<double, 7> coef{1963.579167, 1014.8125, 676.375, 776.125, 1124.0625, 2476.875, 717.4375};
    for (int k = 0; k < 7; ++k)
        CHECK(std::abs(model.fit.coefficients(k) - coef[std::size_t(k)]) < 1e-6);

    r = flowcast_cli({"predict", "--model", (p.dir / "models" / "model_Fri_outbound.json").string(), "--period", "8"});
    CHECK(r.code == 0);
    CHECK(r.out == "641.50\n");

    r = flowcast_cli({"validate", "--models", (p.dir / "models").string(), "--holdout", kData + "/holdout_aug2014.csv",
                      "--schedule", p.schedule, "--out", (p.dir / "validation.json").string()});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    CHECK(r.out.find("validated entries: 56") != std::string::npos);
    CHECK(r.err.empty());
    const auto validation = nlohmann::json::parse(slurp(p.dir / "validation.json"));
    CHECK(validation.at("mean_ape_percent").get<double>() > 0.0);
    CHECK(validation.at("mean_ape_percent").get<double>() < 10.0);

    r = flowcast_cli({"validate", "--models", (p.dir / "models").string(), "--holdout", p.cleaned()});
    CHECK(r.code == 0);
    CHECK(r.err.find("overlap") != std::string::npos);
}

TEST_CASE("commands are deterministic")
{
    Pipeline a("det_a"), b("det_b");
    for (auto* p : {&a, &b}) {
        REQUIRE(p->ingest().code == 0);
        REQUIRE(p->clean().code == 0);
        REQUIRE(p->group().code == 0);
        REQUIRE(p->fit().code == 0);
    }
    CHECK(slurp(a.dir / "counts.csv") == slurp(b.dir / "counts.csv"));
    CHECK(slurp(a.dir / "clean" / "cleaned_counts.csv") == slurp(b.dir / "clean" / "cleaned_counts.csv"));
    CHECK(slurp(a.dir / "clean" / "quality_report.json") == slurp(b.dir / "clean" / "quality_report.json"));
    CHECK(slurp(a.dir / "groups.json") == slurp(b.dir / "groups.json"));
    CHECK(slurp(a.dir / "models" / "model_Sun_outbound.json") == slurp(b.dir / "models" / "model_Sun_outbound.json"));
}

TEST_CASE("predict prints the formula value")
{
    const auto dir = fresh_dir("predict");
    const auto schedule = PeriodSchedule::default_schedule();
    save_model(model_from_parameters({Weekday::Mon, Weekday::Tue, Weekday::Wed, Weekday::Thu}, Direction::Outbound,
                                     schedule, 522.69, {1963.58, 1014.81, 676.38, 776.13, 1124.06, 2476.88, 717.44}),
               dir / "monthu.json");
    auto r = flowcast_cli({"predict", "--model", (dir / "monthu.json").string(), "--period", "6"});
    CHECK(r.code == 0);
    CHECK(r.out == "2999.57\n");
    r = flowcast_cli({"predict", "--model", (dir / "monthu.json").string(), "--period", "9"});
    CHECK(r.code == cli::kExitInput);

    std::ofstream(dir / "other.json")
        << R"({"boundaries": ["05:00", "07:00", "09:00", "11:00", "14:00", "17:00", "19:00", "21:00", "24:00"]})";
    r = flowcast_cli(
        {"predict", "--model", (dir / "monthu.json").string(), "--period", "8", "--schedule", (dir / "other.json").string()});
    CHECK(r.code == 0);
    CHECK(r.out == "522.69\n");
    CHECK(r.err.find("warning") != std::string::npos);
}

TEST_CASE("anova prints a variance table")
{
    Pipeline p("anova");
    REQUIRE(p.ingest().code == 0);
    REQUIRE(p.clean().code == 0);
    const auto r = flowcast_cli({"anova", "--schedule", p.schedule, "--counts", p.cleaned(), "--days", "Mon,Tue,Wed,Thu"});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    CHECK(r.out.find("Source of Difference") != std::string::npos);
    CHECK(r.out.find("P-value") != std::string::npos);
    CHECK(r.out.find("Interaction") != std::string::npos);
}

TEST_CASE("report formats agree")
{
    Pipeline p("report");
    REQUIRE(p.ingest().code == 0);
    REQUIRE(p.clean().code == 0);
    REQUIRE(p.group().code == 0);
    REQUIRE(p.fit().code == 0);
    const auto base = std::vector<std::string>{"report", "--schedule", p.schedule, "--counts", p.cleaned(), "--models",
                                               (p.dir / "models").string()};
    auto csv = base, md = base;
    csv.insert(csv.end(), {"--format", "csv", "--out", (p.dir / "csv").string()});
    md.insert(md.end(), {"--format", "md", "--out", (p.dir / "md").string()});
    REQUIRE(flowcast_cli(csv).code == 0);
    REQUIRE(flowcast_cli(md).code == 0);

    const auto daily = slurp(p.dir / "csv" / "daily_totals.csv");
    CHECK(std::count(daily.begin(), daily.end(), '\n') == 29);
    const auto markdown = slurp(p.dir / "md" / "report.md");
    std::istringstream rows(slurp(p.dir / "csv" / "period_profile.csv"));
    std::string line;
    std::getline(rows, line);
    int checked = 0;
    while (std::getline(rows, line)) {
        std::string cell, md_row = "|";
        std::istringstream fields(line);
        while (std::getline(fields, cell, ','))
            md_row += " " + cell + " |";
        CHECK_MESSAGE(markdown.find(md_row) != std::string::npos, md_row);
        ++checked;
    }
    CHECK(checked == 32);
    CHECK(markdown.find("| Mon-Thu | 6 | 16 | 2999.56 | 2999.56 |") != std::string::npos);
    CHECK(slurp(p.dir / "csv" / "plot_Mon-Thu_outbound.dat").find("6 2999.56") != std::string::npos);

    const auto empty = p.dir / "empty.csv";
    std::ofstream(empty) << "date,day_of_week,period_index,direction,station_id,count,source_id\n";
    auto none = base;
    none[4] = empty.string();
    none.insert(none.end(), {"--out", (p.dir / "none").string()});
    CHECK(flowcast_cli(none).code == cli::kExitInput);
}

TEST_CASE("input errors exit with code 2")
{
    const auto dir = fresh_dir("errors");
    auto r = flowcast_cli({"ingest", "--taps", kData + "/taps_sample.csv", "--schedule", "/no/such/schedule.json",
                           "--out", (dir / "x.csv").string()});
    CHECK(r.code == cli::kExitInput);
    CHECK(r.err.find("/no/such/schedule.json") != std::string::npos);

    std::ofstream(dir / "dup.csv") << "date,day_of_week,period_index,direction,station_id,count,source_id\n"
                                      "2014-07-07,Mon,1,outbound,FUTIAN,2486,afc\n"
                                      "2014-07-07,Mon,1,outbound,FUTIAN,2490,afc\n";
    r = flowcast_cli({"ingest", "--counts", (dir / "dup.csv").string(), "--schedule", kData + "/schedule.json",
                      "--out", (dir / "x.csv").string()});
    CHECK(r.code == cli::kExitInput);
    CHECK(r.err.find("lines 2 and 3") != std::string::npos);

    CHECK(flowcast_cli({}).code == cli::kExitInput);
    CHECK(flowcast_cli({"bogus"}).code == cli::kExitInput);
    CHECK(flowcast_cli({"predict", "--period", "x", "--model", "m.json"}).code == cli::kExitInput);
    CHECK(flowcast_cli({"--direction", "sideways", "predict", "--period", "1", "--model", "m.json"}).code ==
          cli::kExitInput);
    CHECK(flowcast_cli({"--help"}).code == cli::kExitOk);
}

TEST_CASE("numerical errors exit with code 3")
{
    const auto dir = fresh_dir("numerical");
    std::ostringstream csv;
    csv << "date,day_of_week,period_index,direction,station_id,count,source_id\n";
    for (int d = 7; d <= 27; ++d)
        for (int p = 1; p <= 8; ++p)
            if (!(d % 7 == 5 && p == 4))
                csv << "2014-07-" << (d < 10 ? "0" : "") << d << ',' << std::array<const char*, 7>{"Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun"}[std::size_t((d - 7) % 7)] << ','
                    << p << ",outbound,S," << 100 * p + d << ",afc\n";
    std::ofstream(dir / "counts.csv") << csv.str();
    std::ofstream(dir / "groups.json")
        << R"({"groups": [["Mon","Tue","Wed","Thu"], ["Fri"], ["Sat"], ["Sun"]]})";
    const auto r = flowcast_cli({"fit", "--schedule", kData + "/schedule.json", "--counts", (dir / "counts.csv").string(),
                                 "--groups", (dir / "groups.json").string(), "--out", (dir / "models").string()});
    CHECK(r.code == cli::kExitNumerical);
    CHECK(r.err.find("Sat") != std::string::npos);
}

TEST_CASE("taps ingest reports out-of-window taps")
{
    const auto dir = fresh_dir("taps");
    const auto r = flowcast_cli({"ingest", "--taps", kData + "/taps_sample.csv", "--schedule", kData + "/schedule.json",
                                 "--out", (dir / "counts.csv").string()});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    CHECK(r.out.find("taps read: 400") != std::string::npos);
    CHECK(r.out.find("out-of-window taps: ") != std::string::npos);
    CHECK(fs::exists(dir / "counts.csv"));
}
