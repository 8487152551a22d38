#include <catch2/catch_amalgamated.hpp>

#include <mstlkit/series_io.hpp>

#include <unistd.h>

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace io = mstlkit::io;

namespace {

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() /
           ("mstlkit_io_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
};

void write_text(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

}  // namespace

TEST_CASE("doubles are written in shortest round-trip form", "[io]") {
  using mstlkit::io::detail::format_double;
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(-2.5) == "-2.5");

  for (double v : {1.0 / 3.0, 0.30000000000000004, 1e-17, 123456789.123456789}) {
    const std::string s = format_double(v);
    CHECK(std::stod(s) == v);
  }
}

TEST_CASE("the delimiter is sniffed from the header", "[io]") {
  using mstlkit::io::detail::detect_delimiter;
  CHECK(detect_delimiter("a,b,c") == ',');
  CHECK(detect_delimiter("a;b;c") == ';');
  CHECK(detect_delimiter("a\tb\tc") == '\t');
  CHECK(detect_delimiter("t;value,unit;x") == ';');  // 2 semicolons beat 1 comma
  CHECK(detect_delimiter("value") == ',');           // default
}

TEST_CASE("lines split on the delimiter, preserving empty cells", "[io]") {
  using mstlkit::io::detail::split_line;
  CHECK(split_line("a,,b", ',') == std::vector<std::string>{"a", "", "b"});
  CHECK(split_line("a,", ',') == std::vector<std::string>{"a", ""});
  CHECK(split_line("", ',') == std::vector<std::string>{""});
  CHECK(split_line("x", ',') == std::vector<std::string>{"x"});
}

TEST_CASE("missing cells are empty, na, or nan in any case", "[io]") {
  using mstlkit::io::detail::is_missing_cell;
  CHECK(is_missing_cell(""));
  CHECK(is_missing_cell("na"));
  CHECK(is_missing_cell("NA"));
  CHECK(is_missing_cell("NaN"));
  CHECK(is_missing_cell("nan"));
  CHECK_FALSE(is_missing_cell("0"));
  CHECK_FALSE(is_missing_cell("null"));
}

TEST_CASE("cell parsing is strict and reports the data row", "[io]") {
  using mstlkit::io::detail::parse_cell;
  CHECK(parse_cell("1.5", 0, "v") == 1.5);
  CHECK(parse_cell("-3e2", 0, "v") == -300.0);
  CHECK(std::isnan(parse_cell("na", 0, "v")));
  CHECK_THROWS_WITH(parse_cell("12x", 4, "load"),
                    Catch::Matchers::ContainsSubstring("column load") &&
                        Catch::Matchers::ContainsSubstring("row 5"));
  CHECK_THROWS_AS(parse_cell("--", 0, "v"), std::invalid_argument);
}

TEST_CASE("atomic writes land complete, leaving no temp file", "[io]") {
  TempDir dir("atomic");
  const auto target = dir.path / "out.txt";

  io::atomic_write(target, "first\n");
  io::atomic_write(target, "second\n");  // overwrite

  std::ifstream in(target);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(content == "second\n");
  CHECK_FALSE(std::filesystem::exists(dir.path / "out.txt.tmp"));

  CHECK_THROWS_AS(io::atomic_write(dir.path / "no_such_dir" / "x.txt", "y"),
                  std::runtime_error);
}

TEST_CASE("single-column series files read as plain values", "[io]") {
  TempDir dir("read1");
  write_text(dir.path / "v.csv", "load\n1.5\n2.5\nna\n4.5\n");

  const io::InputSeries s = io::read_series_csv(dir.path / "v.csv");
  CHECK(s.value_column == "load");
  CHECK(s.timestamps.empty());
  REQUIRE(s.values.size() == 4);
  CHECK(s.values[0] == 1.5);
  CHECK(std::isnan(s.values[2]));
  CHECK(s.values[3] == 4.5);
}

TEST_CASE("two-column series files read as timestamp and value", "[io]") {
  TempDir dir("read2");
  write_text(dir.path / "tv.csv",
             "# a comment\n"
             "time,demand\r\n"
             "2024-01-01,10\n"
             "\n"
             "2024-01-02,\n"
             "2024-01-03,30\n");

  const io::InputSeries s = io::read_series_csv(dir.path / "tv.csv");
  CHECK(s.value_column == "demand");
  REQUIRE(s.values.size() == 3);
  CHECK(s.timestamps == std::vector<std::string>{"2024-01-01", "2024-01-02", "2024-01-03"});
  CHECK(s.values[0] == 10.0);
  CHECK(std::isnan(s.values[1]));
  CHECK(s.values[2] == 30.0);
}

TEST_CASE("wide files require an explicit column choice", "[io]") {
  TempDir dir("read3");
  write_text(dir.path / "wide.csv",
             "time;load;temp\n"
             "t1;1;20\n"
             "t2;2;21\n"
             "t3;3;22\n");

  CHECK_THROWS_AS(io::read_series_csv(dir.path / "wide.csv"), std::invalid_argument);

  const io::InputSeries s = io::read_series_csv(dir.path / "wide.csv", "temp");
  CHECK(s.value_column == "temp");
  CHECK(s.values == std::vector<double>{20.0, 21.0, 22.0});
  CHECK(s.timestamps == std::vector<std::string>{"t1", "t2", "t3"});

  CHECK_THROWS_WITH(io::read_series_csv(dir.path / "wide.csv", "nope"),
                    Catch::Matchers::ContainsSubstring("no column named 'nope'"));
}

TEST_CASE("malformed series files are rejected with specifics", "[io]") {
  TempDir dir("readbad");

  CHECK_THROWS_AS(io::read_series_csv(dir.path / "absent.csv"), std::runtime_error);

  write_text(dir.path / "short.csv", "v\n1\n2\n");
  CHECK_THROWS_WITH(io::read_series_csv(dir.path / "short.csv"),
                    Catch::Matchers::ContainsSubstring("at least 3 data rows"));

  write_text(dir.path / "ragged.csv", "t,v\na,1\nb\nc,3\n");
  CHECK_THROWS_AS(io::read_series_csv(dir.path / "ragged.csv"), std::invalid_argument);

  write_text(dir.path / "empty.csv", "# only a comment\n");
  CHECK_THROWS_AS(io::read_series_csv(dir.path / "empty.csv"), std::invalid_argument);
}

TEST_CASE("decomposition files carry labeled seasonal columns", "[io]") {
  TempDir dir("decomp");
  const std::size_t n = 5;
  mstlkit::Decomposition d;
  d.periods = {7, 30};
  d.data = {1.125, 2.25, 3.5, 4.75, 5.875};
  d.trend = {0.5, 1.0, 1.5, 2.0, 2.5};
  d.seasonals = {{0.1, 0.2, 0.3, 0.4, 0.5}, {-0.1, -0.2, -0.3, -0.4, -0.5}};
  d.remainder = {0.625, 1.25, 2.0, 2.75, 3.375};

  io::write_decomposition_csv(dir.path / "d.csv", d, {}, {"periods: 7,30", "iterate: 2"});

  std::ifstream in(dir.path / "d.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "# periods: 7,30");
  std::getline(in, line);
  CHECK(line == "# iterate: 2");
  std::getline(in, line);
  CHECK(line == "t,data,trend,seasonal_7,seasonal_30,remainder");
  std::getline(in, line);
  CHECK(line == "1,1.125,0.5,0.1,-0.1,0.625");

  // Column selection on the written file round-trips the trend bitwise.
  const io::InputSeries trend_col = io::read_series_csv(dir.path / "d.csv", "trend");
  CHECK(trend_col.values == d.trend);
  // The t column serves as timestamps.
  CHECK(trend_col.timestamps == std::vector<std::string>{"1", "2", "3", "4", "5"});

  // Explicit timestamps replace the running index.
  io::write_decomposition_csv(dir.path / "d2.csv", d, {"a", "b", "c", "d", "e"});
  const io::InputSeries d2 = io::read_series_csv(dir.path / "d2.csv", "data");
  CHECK(d2.timestamps == std::vector<std::string>{"a", "b", "c", "d", "e"});
  CHECK(d2.values == d.data);
}

TEST_CASE("corpus files round-trip every component bitwise", "[io]") {
  TempDir dir("corpus");
  io::CorpusSeries cs;
  cs.seasonal_names = {"seasonal_short", "seasonal_long"};
  const std::size_t n = 40;
  cs.composite.resize(n);
  cs.trend.resize(n);
  cs.seasonals.assign(2, std::vector<double>(n));
  cs.remainder.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    cs.trend[t] = std::sin(0.1 * double(t)) * 3.0;
    cs.seasonals[0][t] = std::cos(0.7 * double(t)) / 3.0;
    cs.seasonals[1][t] = std::sin(0.05 * double(t)) * 7.0;
    cs.remainder[t] = std::cos(2.9 * double(t)) * 0.01;
    cs.composite[t] = cs.trend[t] + cs.seasonals[0][t] + cs.seasonals[1][t] + cs.remainder[t];
  }

  io::write_corpus_csv(dir.path / "c.csv", cs, {"seed: 42"});
  const io::CorpusSeries back = io::read_corpus_csv(dir.path / "c.csv");

  CHECK(back.seasonal_names == cs.seasonal_names);
  CHECK(back.composite == cs.composite);
  CHECK(back.trend == cs.trend);
  CHECK(back.seasonals == cs.seasonals);
  CHECK(back.remainder == cs.remainder);
}

TEST_CASE("corpus files demand the canonical columns", "[io]") {
  TempDir dir("corpusbad");
  write_text(dir.path / "nocomp.csv", "t,trend,remainder\n1,0,0\n");
  CHECK_THROWS_WITH(io::read_corpus_csv(dir.path / "nocomp.csv"),
                    Catch::Matchers::ContainsSubstring("composite"));

  write_text(dir.path / "norows.csv", "t,composite,trend,remainder\n");
  CHECK_THROWS_AS(io::read_corpus_csv(dir.path / "norows.csv"), std::invalid_argument);
}

TEST_CASE("manifests are JSON lines with positional errors", "[io]") {
  TempDir dir("manifest");
  std::vector<nlohmann::json> entries = {
      {{"path", "a.csv"}, {"kind", "simulated"}, {"seed", 7}, {"periods", {7, 365}}},
      {{"path", "b.csv"}, {"kind", "bootstrap"}, {"block_length", 730}},
  };
  io::write_manifest(dir.path / "m.jsonl", entries);

  const auto back = io::read_manifest(dir.path / "m.jsonl");
  REQUIRE(back.size() == 2);
  CHECK(back[0]["path"] == "a.csv");
  CHECK(back[0]["periods"][1] == 365);
  CHECK(back[1]["block_length"] == 730);

  write_text(dir.path / "bad.jsonl", "{\"ok\": 1}\nnot json\n");
  CHECK_THROWS_WITH(io::read_manifest(dir.path / "bad.jsonl"),
                    Catch::Matchers::ContainsSubstring("line 2"));

  CHECK_THROWS_AS(io::read_manifest(dir.path / "absent.jsonl"), std::runtime_error);
}
