#include <doctest.h>

#include <sstream>

#include "aalenfic/dataset.hpp"
#include "aalenfic/errors.hpp"
#include "aalenfic/json_io.hpp"
#include "helpers.hpp"

using namespace aalenfic;
using testutil::make_dataset;

TEST_CASE("csv parsing: basic, malformed, dedup of event times") {
  Dataset d = Dataset::from_csv_string("time,status,x1\n1,1,1\n2,1,1\n3,1,1\n");
  CHECK(d.n() == 3);
  CHECK(d.r() == 1);

  CHECK_THROWS_AS(Dataset::from_csv_string("time,status,x1\n1,1,abc\n"), ParseError);
  try {
    Dataset::from_csv_string("time,status,x1\n1,1,1\n2,1,abc\n");
  } catch (const ParseError& e) {
    CHECK(e.row() == 2);
  }

  Dataset d2 = Dataset::from_csv_string("time,status,x1,x2\n2,0,1,5\n1,1,1,3\n");
  CHECK(d2.n() == 2);
  CHECK(d2.r() == 2);
  EventGrid grid = event_grid(d2, 10.0);
  REQUIRE(grid.size() == 1);
  CHECK(grid.times[0] == 1.0);  // only delta=1 times enter the grid
}

TEST_CASE("csv validation: negative time, no covariates, bad status, bad header") {
  CHECK_THROWS_AS(Dataset::from_csv_string("time,status,x1\n-1,1,1\n"), ValidationError);
  CHECK_THROWS_AS(Dataset::from_csv_string("time,status\n1,1\n"), ParseError);
  CHECK_THROWS_AS(Dataset::from_csv_string("time,status,x1\n1,2,1\n"), ParseError);
  CHECK_THROWS_AS(Dataset::from_csv_string("t,status,x1\n1,1,1\n"), ParseError);
  CHECK_THROWS_AS(Dataset::from_csv_string("time,status,x1\n1,1\n"), ParseError);
}

TEST_CASE("csv accepts comment lines and round-trips") {
  Dataset d = Dataset::from_csv_string("# manifest: {}\ntime,status,x1\n0.5,1,2\n1.25,0,0.1\n");
  CHECK(d.n() == 2);
  Dataset back = Dataset::from_csv_string(d.to_csv());
  REQUIRE(back.n() == d.n());
  for (int i = 0; i < d.n(); ++i) {
    CHECK(back.records()[i].time == d.records()[i].time);
    CHECK(back.records()[i].event == d.records()[i].event);
    CHECK(back.records()[i].covariates == d.records()[i].covariates);
  }
}

TEST_CASE("json round-trip") {
  Dataset d = testutil::four_record_fixture();
  Dataset back = dataset_from_json(dataset_to_json(d));
  REQUIRE(back.n() == d.n());
  for (int i = 0; i < d.n(); ++i) {
    CHECK(back.records()[i].time == d.records()[i].time);
    CHECK(back.records()[i].event == d.records()[i].event);
    CHECK(back.records()[i].covariates == d.records()[i].covariates);
  }
}

TEST_CASE("event_grid: tau cut, all censored, tie collapse") {
  Dataset d = make_dataset({1, 2, 3}, {1, 1, 1}, {{1}, {1}, {1}});
  CHECK(event_grid(d, 2.5).times == std::vector<double>{1, 2});

  Dataset censored = make_dataset({1, 2}, {0, 0}, {{1}, {1}});
  CHECK(event_grid(censored, 5.0).empty());
  CHECK(censored.max_event_time() == 0.0);

  Dataset tied = make_dataset({2, 2, 1}, {1, 1, 0}, {{1}, {1}, {1}});
  CHECK(event_grid(tied, 5.0).times == std::vector<double>{2});

  CHECK_THROWS_AS(event_grid(d, 0.0), ValidationError);
}

TEST_CASE("event_grid nests as tau grows") {
  Dataset d = make_dataset({0.5, 1.5, 2.5, 3.5}, {1, 0, 1, 1}, {{1}, {2}, {3}, {4}});
  for (double tau1 : {0.6, 1.0, 2.6}) {
    for (double tau2 : {2.6, 3.6}) {
      if (tau1 > tau2) continue;
      const auto g1 = event_grid(d, tau1).times;
      const auto g2 = event_grid(d, tau2).times;
      CHECK(std::includes(g2.begin(), g2.end(), g1.begin(), g1.end()));
    }
  }
}

TEST_CASE("at_risk: pointwise values and monotonicity") {
  Dataset d = make_dataset({1, 2, 3}, {1, 1, 1}, {{1}, {1}, {1}});
  CHECK(at_risk(d, 2.0) == std::vector<bool>{false, true, true});
  CHECK(at_risk(d, 0.0) == std::vector<bool>{true, true, true});
  CHECK(at_risk(d, 10.0) == std::vector<bool>{false, false, false});

  std::vector<bool> prev = at_risk(d, 0.0);
  for (double u : {0.5, 1.0, 1.5, 2.0, 3.0, 3.5}) {
    std::vector<bool> cur = at_risk(d, u);
    for (int i = 0; i < d.n(); ++i) CHECK(cur[i] <= prev[i]);
    prev = cur;
  }
}

TEST_CASE("ties at a time point: censored individual stays at risk") {
  // Y_i(u) = 1{T_i >= u} taken literally
  Dataset d = make_dataset({2, 2}, {1, 0}, {{1}, {1}});
  CHECK(at_risk(d, 2.0) == std::vector<bool>{true, true});
}
