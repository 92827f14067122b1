#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "fakewatch/common/error.hpp"
#include "fakewatch/common/rng.hpp"
#include "fakewatch/corpus/corpus.hpp"
#include "fakewatch/corpus/feed.hpp"
#include "fakewatch/corpus/io.hpp"
#include "fakewatch/corpus/text.hpp"
#include "pii_oracle.hpp"

using namespace fakewatch;
using namespace fakewatch::corpus;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIo;
}

Record labeled(const std::string& id, int label, const std::string& text = "") {
  Record r;
  r.id = id;
  r.text = text.empty() ? "text of " + id : text;
  r.label = label_from_int(label);
  r.label_provenance = LabelProvenance::kLlm;
  return r;
}

Corpus labeled_corpus(int real, int fake) {
  Corpus c;
  for (int i = 0; i < real; ++i) c.records.push_back(labeled("r" + std::to_string(i), 0));
  for (int i = 0; i < fake; ++i) c.records.push_back(labeled("f" + std::to_string(i), 1));
  return c;
}

std::map<std::pair<Partition, int>, int> partition_counts(const Corpus& c) {
  std::map<std::pair<Partition, int>, int> counts;
  for (const auto& r : c.records) ++counts[{c.split->at(r.id), r.label_value()}];
  return counts;
}

const std::vector<KeywordGroup> kGroups = {
    {"elections", {"electoral college", "presidential candidates 2024", "voting patterns"}},
    {"religion", {"religious freedom", "religious discrimination"}},
    {"race", {"race relations", "ethnic diversity"}},
};

}  // namespace

TEST(Feed, RssItemsInDocumentOrder) {
  const char* doc = R"(<?xml version="1.0"?><rss version="2.0"><channel><title>Wire</title>
    <item><title>One</title><link>https://e.com/1</link><pubDate>Thu, 20 Apr 2023 10:00:00 GMT</pubDate></item>
    <item><title>Two</title><link>https://e.com/2</link><description>&lt;b&gt;Body&lt;/b&gt; text</description></item>
    <item><title>Three</title><link>https://e.com/3</link></item></channel></rss>)";
  auto items = parse_feed(doc);
  ASSERT_EQ(items.size(), 3u);
  EXPECT_EQ(items[0].title, "One");
  EXPECT_EQ(items[2].link, "https://e.com/3");
  ASSERT_TRUE(items[0].published_at.has_value());
  EXPECT_EQ(*items[0].published_at, make_timestamp(2023, 4, 20, 10));
  EXPECT_FALSE(items[1].published_at.has_value());
  EXPECT_EQ(strip_html(items[1].summary), "Body text");
}

TEST(Feed, EmptyChannelAndAtom) {
  EXPECT_TRUE(parse_feed("<rss><channel><title>x</title></channel></rss>").empty());
  const char* atom = R"(<feed xmlns="http://www.w3.org/2005/Atom"><title>A</title>
    <entry><title>E1</title><link href="https://a.org/e1"/><updated>2023-05-01T12:00:00Z</updated>
    <summary>Hello there.</summary></entry></feed>)";
  auto items = parse_feed(atom);
  ASSERT_EQ(items.size(), 1u);
  EXPECT_EQ(items[0].link, "https://a.org/e1");
  EXPECT_EQ(*items[0].published_at, make_timestamp(2023, 5, 1, 12));
}

TEST(Feed, Errors) {
  try {
    parse_feed("<rss><channel><item></channel></rss>");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_GT(e.byte_offset(), 0);
  }
  EXPECT_EQ(code_of([] { parse_feed("<html><body/></html>"); }), ErrorCode::kFormat);
}

TEST(Extract, FirstFiveSentences) {
  std::string body = "One is here. Two is here. Three is here. Four is here. Five is here. Six is here. Seven.";
  EXPECT_EQ(extract_article_text(body), "One is here. Two is here. Three is here. Four is here. Five is here.");
  EXPECT_EQ(extract_article_text("A cat sat. B dog ran! C bird flew?"), "A cat sat. B dog ran! C bird flew?");
  EXPECT_EQ(split_sentences("Dr. Smith won. He spoke.").size(), 2u);
  EXPECT_EQ(split_sentences("The U.S. Senate voted. It passed.").size(), 2u);
  EXPECT_EQ(code_of([] { extract_article_text("   "); }), ErrorCode::kEmptyInput);
}

TEST(Categorize, Rules) {
  EXPECT_EQ(categorize_article("Debate over Religious Freedom grows", kGroups), "religion");
  EXPECT_EQ(categorize_article("Nothing to see", kGroups), kUncategorized);
  EXPECT_EQ(categorize_article("voting patterns and the electoral college versus race relations", kGroups),
            "elections");
  // one hit each: config order wins
  EXPECT_EQ(categorize_article("ethnic diversity and religious freedom", kGroups), "religion");
  // whole-phrase matching only
  EXPECT_EQ(categorize_article("irreligious freedoms", kGroups), kUncategorized);
  EXPECT_EQ(code_of([] { categorize_article("x", {}); }), ErrorCode::kInvalidArgument);
}

TEST(Sanitize, Examples) {
  EXPECT_EQ(sanitize_text("write me@x.com now"), "write [EMAIL] now");
  EXPECT_EQ(sanitize_text("see https://a.b/c"), "see [URL]");
  EXPECT_EQ(sanitize_text("per @jdoe report"), "per [USER] report");
  EXPECT_EQ(sanitize_text("(see www.site.org/x)."), "(see [URL]).");
  EXPECT_EQ(sanitize_text("caf\xc3\xa9 stays"), "caf\xc3\xa9 stays");
}

TEST(Sanitize, PropertyAgainstRegexOracle) {
  fakewatch::testing::PiiOracle oracle;
  Rng rng(7);
  for (int i = 0; i < 2000; ++i) {
    auto sample = fakewatch::testing::make_pii_sample(rng, i % 2 == 1);
    std::string once = sanitize_text(sample.text);
    ASSERT_FALSE(oracle.any(once)) << sample.text << " -> " << once;
    ASSERT_EQ(sanitize_text(once), once) << sample.text;
    if (sample.exact) ASSERT_EQ(once, sample.expected) << sample.text;
    if (!oracle.any(sample.text)) ASSERT_EQ(once, sample.text);
  }
}

TEST(Consolidate, SizesAndConflicts) {
  std::vector<Record> curated, bench;
  for (int i = 0; i < 9; ++i) curated.push_back(labeled("c" + std::to_string(i), i % 2));
  for (int i = 0; i < 5; ++i) {
    Record r = labeled("b" + std::to_string(i), 1);
    r.dataset_origin = DatasetOrigin::kBenchmark;
    bench.push_back(r);
  }
  auto c = consolidate(curated, bench);
  ASSERT_EQ(c.records.size(), 14u);
  EXPECT_EQ(c.records[9].dataset_origin, DatasetOrigin::kBenchmark);
  EXPECT_EQ(consolidate(curated, {}).records.size(), 9u);
  bench.push_back(labeled("c3", 0));
  try {
    consolidate(curated, bench);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConflict);
    EXPECT_NE(std::string(e.what()).find("c3"), std::string::npos);
  }
}

TEST(Dedupe, NormalizedText) {
  Corpus c;
  c.records = {labeled("a", 0, "Same  text"), labeled("b", 1, "same text"), labeled("c", 0, "Other"),
               labeled("d", 0, "Same text")};
  auto d = dedupe_records(c);
  ASSERT_EQ(d.records.size(), 2u);
  EXPECT_EQ(d.records[0].id, "a");
  EXPECT_EQ(d.records[1].id, "c");
  Corpus distinct;
  distinct.records = {labeled("x", 0, "one"), labeled("y", 1, "two")};
  EXPECT_EQ(dedupe_records(distinct).records.size(), 2u);
}

TEST(Split, SizesAndStratification) {
  auto s = split_corpus(labeled_corpus(5, 5), 0.8, 42);
  EXPECT_EQ(s.partition(Partition::kTrain).size(), 8u);
  EXPECT_EQ(s.partition(Partition::kTest).size(), 2u);

  auto counts = partition_counts(split_corpus(labeled_corpus(6, 4), 0.8, 42));
  EXPECT_EQ((counts[{Partition::kTrain, 0}]), 5);
  EXPECT_EQ((counts[{Partition::kTrain, 1}]), 3);
  EXPECT_EQ((counts[{Partition::kTest, 0}]), 1);
  EXPECT_EQ((counts[{Partition::kTest, 1}]), 1);
}

TEST(Split, DeterministicAndCovering) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    int real = 2 + static_cast<int>(rng.uniform_index(40));
    int fake = 2 + static_cast<int>(rng.uniform_index(40));
    double frac = 0.1 + 0.8 * rng.uniform01();
    auto c = labeled_corpus(real, fake);
    auto a = split_corpus(c, frac, trial);
    auto b = split_corpus(c, frac, trial);
    ASSERT_EQ(*a.split, *b.split);
    ASSERT_EQ(a.split->size(), c.records.size());
    auto n = static_cast<std::size_t>(std::llround(frac * (real + fake)));
    ASSERT_EQ(a.partition(Partition::kTrain).size(), n);
  }
}

TEST(Split, RejectsUnlabeled) {
  auto c = labeled_corpus(3, 3);
  Record u;
  u.id = "loose";
  u.text = "t";
  c.records.push_back(u);
  try {
    split_corpus(c, 0.8, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("loose"), std::string::npos);
  }
}

TEST(Upsample, BalancesTrainOnly) {
  auto s = split_corpus(labeled_corpus(8, 5), 0.8, 42);
  auto before = partition_counts(s);
  auto u = upsample_train(s, 42);
  auto after = partition_counts(u);
  EXPECT_EQ((after[{Partition::kTrain, 0}]), (after[{Partition::kTrain, 1}]));
  EXPECT_EQ((after[{Partition::kTest, 0}]), (before[{Partition::kTest, 0}]));
  EXPECT_EQ((after[{Partition::kTest, 1}]), (before[{Partition::kTest, 1}]));
  std::set<std::string> minority_texts;
  for (const auto* r : s.partition(Partition::kTrain)) {
    if (r->label_value() == 1) minority_texts.insert(r->text);
  }
  for (std::size_t i = s.records.size(); i < u.records.size(); ++i) {
    EXPECT_TRUE(minority_texts.contains(u.records[i].text));
    EXPECT_EQ(u.records[i].label_value(), 1);
  }
  auto balanced = split_corpus(labeled_corpus(5, 5), 0.8, 1);
  EXPECT_EQ(upsample_train(balanced, 1).records.size(), 10u);
  EXPECT_EQ(code_of([] { upsample_train(labeled_corpus(2, 2), 1); }), ErrorCode::kState);
}

TEST(Io, JsonlRoundTripAndValidation) {
  Corpus c = labeled_corpus(1, 1);
  c.records[0].metadata["source"] = "wire";
  c.records.push_back(Record{"u1", DatasetOrigin::kBenchmark, "unl\"abeled\n", Label::kUnlabeled,
                             LabelProvenance::kNone, {}});
  auto back = corpus_from_jsonl(corpus_to_jsonl(c));
  ASSERT_EQ(back.records.size(), 3u);
  EXPECT_EQ(back.records[0].metadata.at("source"), "wire");
  EXPECT_EQ(back.records[2].text, "unl\"abeled\n");
  EXPECT_FALSE(back.records[2].is_labeled());
  EXPECT_EQ(corpus_to_jsonl(back), corpus_to_jsonl(c));
  EXPECT_ANY_THROW(corpus_from_jsonl(R"({"id":"x","text":"t","label":null,"label_provenance":"llm"})"));
}

TEST(Io, BenchmarkChronologicalWithSentinel) {
  std::string csv =
      "source,date,text,label\n"
      "a,2023-06-01,\"later, with comma\",1\n"
      "b,2023-05-01,earlier,0\n"
      "c,,undated,1\n"
      "d,2023-05-02,,0\n";
  BenchmarkLoadOptions all;
  auto r = load_benchmark(csv, false, all);
  ASSERT_EQ(r.records.size(), 3u);
  EXPECT_EQ(r.dropped_missing_text, 1u);
  EXPECT_EQ(r.missing_dates, 1u);
  EXPECT_EQ(r.records[0].text, "undated");  // sentinel sorts first
  EXPECT_EQ(r.records[1].text, "earlier");
  EXPECT_FALSE(r.records[1].is_labeled());
  EXPECT_EQ(r.records[1].metadata.at("benchmark_label"), "0");

  BenchmarkLoadOptions ranged;
  ranged.from = make_timestamp(2023, 4, 20);
  ranged.limit = 1;
  ranged.label_provenance = LabelProvenance::kVerified;
  auto q = load_benchmark(csv, false, ranged);
  ASSERT_EQ(q.records.size(), 1u);
  EXPECT_EQ(q.records[0].text, "earlier");
  EXPECT_EQ(q.records[0].label, Label::kReal);
  EXPECT_EQ(q.outside_date_range, 1u);
}
