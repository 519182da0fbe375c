#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <thread>

#include <httplib.h>

#include "tssort/service.hpp"

namespace tssort::service {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("tssort_service_" + std::string(
                                    ::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
  }
  void TearDown() override {
    fs::permissions(dir_, fs::perms::owner_all, fs::perm_options::add);
    fs::remove_all(dir_);
  }

  static std::string create(SessionService& service, const json& items,
                            const std::string& algorithm = "tssort_partner_wover") {
    const Response r = service.create_session({{"items", items}, {"algorithm", algorithm}});
    EXPECT_EQ(r.status, 201) << r.body.dump();
    return r.body.value("session_id", "");
  }

  // Answers every pair by the position of its labels in `preference` (earlier is greater).
  static void answer_all(SessionService& service, const std::string& id,
                         const std::vector<std::string>& preference) {
    for (;;) {
      const Response pair = service.get_next_pair(id);
      if (pair.status == 409) return;
      ASSERT_EQ(pair.status, 200);
      const auto rank = [&](const json& side) {
        return std::find(preference.begin(), preference.end(), side["label"].get<std::string>()) -
               preference.begin();
      };
      const std::string winner = rank(pair.body["first"]) < rank(pair.body["second"]) ? "first"
                                                                                       : "second";
      ASSERT_EQ(service.post_outcome(id, {{"pair_token", pair.body["pair_token"]},
                                          {"winner", winner}})
                    .status,
                200);
    }
  }

  fs::path dir_;
};

TEST_F(ServiceTest, CreateSession) {
  SessionService service(dir_);
  const Response r = service.create_session(
      {{"items", {"a", "b", "c", "d", "e", "f", "g", "h"}}, {"algorithm", "tssort_partner_wover"}});
  ASSERT_EQ(r.status, 201);
  EXPECT_EQ(r.body["budget"], 24);
  EXPECT_EQ(r.body["algorithm"], "tssort_partner_wover");
  EXPECT_EQ(r.body["item_count"], 8);
  EXPECT_EQ(r.body["schema_version"], kSchemaVersion);
  EXPECT_EQ(r.body["session_id"].get<std::string>().size(), 32u);
  EXPECT_TRUE(fs::exists(dir_ / (r.body["session_id"].get<std::string>() + ".json")));

  const Response defaulted = service.create_session({{"items", {"x", "y", "z"}}});
  ASSERT_EQ(defaulted.status, 201);
  EXPECT_EQ(defaulted.body["budget"], 5);
  EXPECT_NE(defaulted.body["session_id"], r.body["session_id"]);
}

TEST_F(ServiceTest, CreateSessionValidation) {
  SessionService service(dir_);
  const Response one = service.create_session({{"items", {"only"}}});
  EXPECT_EQ(one.status, 400);
  EXPECT_NE(one.body["error"].get<std::string>().find("at least 2 items"), std::string::npos);
  EXPECT_EQ(one.body["schema_version"], kSchemaVersion);
  EXPECT_EQ(service.create_session({{"items", {"a", "b", "a"}}}).status, 400);
  EXPECT_EQ(service.create_session({{"items", {"a", ""}}}).status, 400);
  EXPECT_EQ(service.create_session({{"items", {"a", 3}}}).status, 400);
  EXPECT_EQ(service.create_session({{"items", "a,b"}}).status, 400);
  EXPECT_EQ(service.create_session(json::array()).status, 400);
  EXPECT_EQ(service.create_session({{"items", {"a", "b"}}, {"algorithm", "bogo"}}).status, 400);
  EXPECT_EQ(service.create_session({{"items", {"a", "b"}}, {"params", {{"trueskill", {{"beta", -1}}}}}})
                .status,
            400);
  EXPECT_TRUE(fs::is_empty(dir_));
}

TEST_F(ServiceTest, NextPairIsIdempotent) {
  SessionService service(dir_);
  const std::string id = create(service, {"a", "b", "c", "d"});
  const Response first = service.get_next_pair(id);
  ASSERT_EQ(first.status, 200);
  EXPECT_EQ(first.body["first"]["index"], 0);
  EXPECT_EQ(first.body["second"]["index"], 1);
  EXPECT_EQ(first.body["first"]["label"], "a");
  EXPECT_EQ(first.body["comparisons_done"], 0);
  EXPECT_EQ(first.body["done"], false);
  EXPECT_EQ(service.get_next_pair(id).body, first.body);
}

TEST_F(ServiceTest, UnknownSession) {
  SessionService service(dir_);
  EXPECT_EQ(service.get_next_pair("0123456789abcdef0123456789abcdef").status, 404);
  EXPECT_EQ(service.get_ranking("../etc/passwd").status, 404);
  EXPECT_EQ(service.get_session("").status, 404);
  EXPECT_EQ(service.post_outcome("nope", {{"pair_token", "0:0:1"}, {"winner", "first"}}).status,
            404);
}

TEST_F(ServiceTest, PostOutcomeAndStaleToken) {
  SessionService service(dir_);
  const std::string id = create(service, {"a", "b", "c"});
  const json pair = service.get_next_pair(id).body;
  const json body = {{"pair_token", pair["pair_token"]}, {"winner", "first"}};
  const Response ok = service.post_outcome(id, body);
  ASSERT_EQ(ok.status, 200);
  EXPECT_EQ(ok.body["comparisons_done"], 1);

  const json before = service.get_session(id).body;
  const Response again = service.post_outcome(id, body);
  EXPECT_EQ(again.status, 409);
  EXPECT_EQ(service.get_session(id).body, before);

  const json next = service.get_next_pair(id).body;
  EXPECT_EQ(service.post_outcome(id, {{"pair_token", next["pair_token"]}, {"winner", "left"}}).status,
            400);
  EXPECT_EQ(service.post_outcome(id, {{"pair_token", next["pair_token"]}}).status, 400);
  EXPECT_EQ(service.post_outcome(id, {{"winner", "first"}}).status, 400);
  EXPECT_EQ(service.post_outcome(id, json::array()).status, 400);
  EXPECT_EQ(service.get_session(id).body, before);
}

TEST_F(ServiceTest, DrawOnEqualRatingsIsSymmetric) {
  SessionService service(dir_);
  const std::string id = create(service, {"a", "b"});
  const json pair = service.get_next_pair(id).body;
  ASSERT_EQ(service.post_outcome(id, {{"pair_token", pair["pair_token"]}, {"winner", "draw"}}).status,
            200);
  const json ranking = service.get_ranking(id).body["ranking"];
  ASSERT_EQ(ranking.size(), 2u);
  for (const auto& row : ranking) {
    EXPECT_DOUBLE_EQ(row["mu"].get<double>(), 25.0);
    EXPECT_LT(row["sigma"].get<double>(), 25.0 / 3.0);
  }
  EXPECT_EQ(ranking[0]["sigma"], ranking[1]["sigma"]);
  EXPECT_EQ(ranking[0]["label"], "a");
}

TEST_F(ServiceTest, FinishedSession) {
  SessionService service(dir_);
  const std::string id = create(service, {"a", "b"});
  answer_all(service, id, {"b", "a"});
  const Response done = service.get_next_pair(id);
  EXPECT_EQ(done.status, 409);
  EXPECT_EQ(done.body["done"], true);
  EXPECT_EQ(done.body["ranking"], "/sessions/" + id + "/ranking");
  EXPECT_EQ(service.post_outcome(id, {{"pair_token", "2:0:1"}, {"winner", "first"}}).status, 409);
  const json ranking = service.get_ranking(id).body;
  EXPECT_EQ(ranking["done"], true);
  EXPECT_EQ(ranking["ranking"][0]["label"], "b");
  EXPECT_EQ(ranking["ranking"][0]["rank"], 1);
}

TEST_F(ServiceTest, ConsistentAnswersRecoverThePreference) {
  SessionService service(dir_);
  const std::vector<std::string> preference{"fig", "apple", "kiwi", "date",
                                            "plum", "lime", "pear", "cherry"};
  const std::string id = create(service, {"apple", "cherry", "date", "fig", "kiwi", "lime",
                                          "pear", "plum"});
  answer_all(service, id, preference);
  const json ranking = service.get_ranking(id).body["ranking"];
  ASSERT_EQ(ranking.size(), 8u);
  // Neighbouring ranks agree with the preference; the full order is checked by replay below.
  const json state = service.get_session(id).body;
  const PersistedSession replayed = from_json(state);
  for (std::size_t k = 0; k < 8; ++k)
    EXPECT_EQ(ranking[k]["index"].get<std::size_t>(), replayed.engine.order()[k]);
  for (std::size_t k = 1; k < 8; ++k)
    EXPECT_GE(ranking[k - 1]["conservative_score"].get<double>(),
              ranking[k]["conservative_score"].get<double>());
}

TEST_F(ServiceTest, EloRankingRows) {
  SessionService service(dir_);
  const std::string id = create(service, {"a", "b", "c"}, "elosort_partner");
  const json pair = service.get_next_pair(id).body;
  service.post_outcome(id, {{"pair_token", pair["pair_token"]}, {"winner", "second"}});
  const json ranking = service.get_ranking(id).body["ranking"];
  EXPECT_EQ(ranking[0]["label"], "b");
  EXPECT_EQ(ranking[0]["sigma"], 0.0);
  EXPECT_EQ(ranking[0]["mu"], ranking[0]["conservative_score"]);
  EXPECT_GT(ranking[0]["mu"].get<double>(), 1000.0);
}

TEST_F(ServiceTest, RestartRestoresIdenticalState) {
  std::string id;
  json before;
  {
    SessionService service(dir_);
    id = create(service, {"a", "b", "c", "d", "e"}, "tssort_wover");
    for (int k = 0; k < 4; ++k) {
      const json pair = service.get_next_pair(id).body;
      service.post_outcome(id, {{"pair_token", pair["pair_token"]}, {"winner", k % 2 ? "first" : "draw"}});
    }
    before = service.get_session(id).body;
  }
  SessionService restarted(dir_);
  EXPECT_EQ(restarted.get_session(id).body, before);
  const json pair = restarted.get_next_pair(id).body;
  EXPECT_EQ(restarted.post_outcome(id, {{"pair_token", pair["pair_token"]}, {"winner", "first"}}).status,
            200);
}

TEST_F(ServiceTest, TamperedDocumentIsRejected) {
  std::string id;
  {
    SessionService service(dir_);
    id = create(service, {"a", "b", "c"});
    const json pair = service.get_next_pair(id).body;
    service.post_outcome(id, {{"pair_token", pair["pair_token"]}, {"winner", "first"}});
  }
  const fs::path file = dir_ / (id + ".json");
  json doc = json::parse(std::ifstream(file));
  doc["history"][0]["outcome"] = "second";
  std::ofstream(file) << doc.dump();
  SessionService restarted(dir_);
  const Response r = restarted.get_session(id);
  EXPECT_EQ(r.status, 500);
  EXPECT_EQ(r.body["schema_version"], kSchemaVersion);
  EXPECT_NE(r.body["error"].get<std::string>().find("reproduce"), std::string::npos);

  std::ofstream(file) << "{ not json";
  EXPECT_EQ(SessionService(dir_).get_next_pair(id).status, 500);
}

TEST_F(ServiceTest, StorageFailures) {
  std::ofstream(fs::temp_directory_path() / "tssort_not_a_dir") << "x";
  EXPECT_THROW(SessionService(fs::temp_directory_path() / "tssort_not_a_dir"), std::runtime_error);

  SessionService service(dir_);
  const std::string id = create(service, {"a", "b", "c"});
  const json pair = service.get_next_pair(id).body;
  fs::remove_all(dir_);
  EXPECT_EQ(service.create_session({{"items", {"a", "b"}}}).status, 500);
  EXPECT_EQ(service.post_outcome(id, {{"pair_token", pair["pair_token"]}, {"winner", "first"}}).status,
            500);
  EXPECT_EQ(service.get_next_pair(id).body["comparisons_done"], 0);
  fs::create_directories(dir_);
}

TEST_F(ServiceTest, ConcurrentClientsApplyEachPairOnce) {
  SessionService service(dir_);
  const std::string id = create(service, {"a", "b", "c", "d", "e", "f"});
  std::atomic<int> accepted{0};
  std::vector<std::thread> clients;
  for (int c = 0; c < 4; ++c) {
    clients.emplace_back([&] {
      for (int k = 0; k < 40; ++k) {
        const Response pair = service.get_next_pair(id);
        if (pair.status != 200) return;
        if (service.post_outcome(id, {{"pair_token", pair.body["pair_token"]}, {"winner", "first"}})
                .status == 200)
          ++accepted;
      }
    });
  }
  for (auto& t : clients) t.join();
  const json state = service.get_session(id).body;
  EXPECT_EQ(accepted.load(), state["comparisons_done"].get<int>());
  EXPECT_EQ(state["history"].size(), state["comparisons_done"].get<std::size_t>());
}

TEST_F(ServiceTest, HttpRoundTrip) {
  SessionService service(dir_);
  HttpServer server(service);
  const auto port = server.bind("127.0.0.1", 0);
  ASSERT_TRUE(port.has_value());
  std::thread worker([&] { server.serve(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", *port);
  auto health = client.Get("/healthz");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);
  EXPECT_EQ(health->get_header_value("Access-Control-Allow-Origin"), "*");

  auto created = client.Post("/sessions", R"({"items":["x","y","z"]})", "application/json");
  ASSERT_TRUE(created);
  ASSERT_EQ(created->status, 201);
  const std::string id = json::parse(created->body)["session_id"];

  auto pair = client.Get("/sessions/" + id + "/next-pair");
  ASSERT_EQ(pair->status, 200);
  const json token = json::parse(pair->body)["pair_token"];
  auto posted = client.Post("/sessions/" + id + "/outcome",
                            json{{"pair_token", token}, {"winner", "second"}}.dump(),
                            "application/json");
  EXPECT_EQ(posted->status, 200);
  EXPECT_EQ(client.Post("/sessions/" + id + "/outcome", "{oops", "application/json")->status, 400);
  EXPECT_EQ(client.Get("/sessions/" + id + "/ranking")->status, 200);
  EXPECT_EQ(json::parse(client.Get("/sessions/" + id)->body)["comparisons_done"], 1);
  EXPECT_EQ(client.Get("/sessions/ffffffffffffffffffffffffffffffff")->status, 404);
  auto missing = client.Get("/nowhere");
  EXPECT_EQ(missing->status, 404);
  EXPECT_EQ(json::parse(missing->body)["schema_version"], kSchemaVersion);
  EXPECT_EQ(client.Options("/sessions")->status, 204);

  server.stop();
  worker.join();
}

TEST_F(ServiceTest, BindFailsOnOccupiedPort) {
  SessionService service(dir_);
  HttpServer first(service);
  const auto port = first.bind("127.0.0.1", 0);
  ASSERT_TRUE(port.has_value());
  HttpServer second(service);
  EXPECT_FALSE(second.bind("127.0.0.1", *port).has_value());
}

}  // namespace
}  // namespace tssort::service
