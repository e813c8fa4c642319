#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "structeval/dataset.hpp"
#include "support/bridge.hpp"

using namespace structeval;

namespace {

const std::string kThreeLines =
    R"({"id": "a", "input_text": "Blue Spice is a pub.", "json_schema": {"type": "object", "properties": {"name": {"type": "string"}}}, "gold": {"name": "Blue Spice"}})"
    "\n"
    R"({"id": "b", "input_text": "x", "json_schema": {"type": "string"}, "gold": "x"})"
    "\n"
    R"({"id": "c", "input_text": "y", "json_schema": "{\"type\": \"number\"}", "gold": 3})"
    "\n";

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
    const auto p = std::filesystem::temp_directory_path() / name;
    std::ofstream(p, std::ios::binary) << content;
    return p;
}

}  // namespace

TEST(LoadDataset, ThreeCleanLines) {
    const auto r = parse_dataset(kThreeLines);
    ASSERT_EQ(r.records.size(), 3u);
    EXPECT_TRUE(r.rejects.empty());
    EXPECT_EQ(r.records[0].id, "a");
    EXPECT_EQ(r.records[0].gold, parse_strict(R"({"name": "Blue Spice"})"));
    // String-encoded schemas are kept as they are; decoding is a validation concern.
    EXPECT_TRUE(r.records[2].json_schema.is_string());
}

TEST(LoadDataset, MissingGoldIsRejectedWithField) {
    const std::string content = kThreeLines + R"({"id": "d", "input_text": "z", "json_schema": {"type": "null"}})" "\n";
    const auto r = parse_dataset(content);
    EXPECT_EQ(r.records.size(), 3u);
    ASSERT_EQ(r.rejects.size(), 1u);
    EXPECT_EQ(r.rejects[0].line, 4u);
    EXPECT_EQ(r.rejects[0].code, RejectCode::MissingField);
    EXPECT_EQ(r.rejects[0].field, "gold");
}

TEST(LoadDataset, SampleE2ERecord) {
    const auto r = parse_dataset(testsupport::read_fixture("sample_records.jsonl"));
    ASSERT_EQ(r.records.size(), 5u);
    const DatasetRecord& e2e = r.records[1];
    EXPECT_EQ(e2e.id, "e2e");
    EXPECT_EQ(e2e.gold.find("name")->as_string(), "Blue Spice");
    EXPECT_EQ(e2e.gold.as_object().size(), 5u);
    EXPECT_TRUE(e2e.json_schema.is_object());
}

TEST(LoadDataset, DefaultIdIsLineNumber) {
    const std::string content = "\n" R"({"input_text": "x", "json_schema": {"type": "string"}, "gold": "x"})" "\n";
    const auto r = parse_dataset(content);
    ASSERT_EQ(r.records.size(), 1u);
    EXPECT_EQ(r.records[0].id, "2");
}

TEST(LoadDataset, BlankLinesAndCrlf) {
    std::string crlf;
    for (char c : kThreeLines) {
        if (c == '\n') crlf += "\r\n\r\n   \n";
        else crlf += c;
    }
    const auto r = parse_dataset(crlf);
    EXPECT_EQ(r.records.size(), 3u);
    EXPECT_TRUE(r.rejects.empty());
}

TEST(LoadDataset, RejectKinds) {
    const std::string content = kThreeLines + "[1, 2]\n" R"({"id": 5, "input_text": "x", "json_schema": {}, "gold": 1})" "\n";
    const auto r = parse_dataset(content + "{\"id\": \"a\", \"input_text\": \"again\", \"json_schema\": {}, \"gold\": 1}\n");
    ASSERT_EQ(r.rejects.size(), 3u);
    EXPECT_EQ(r.rejects[0].code, RejectCode::NotAnObject);
    EXPECT_EQ(r.rejects[1].code, RejectCode::FieldType);
    EXPECT_EQ(r.rejects[1].field, "id");
    EXPECT_EQ(r.rejects[2].code, RejectCode::DuplicateId);
    EXPECT_EQ(r.rejects[2].line, 6u);
}

TEST(LoadDataset, NonStringInputTextRejected) {
    const auto r = parse_dataset(kThreeLines + R"({"input_text": 3, "json_schema": {}, "gold": 1})" "\n");
    ASSERT_EQ(r.rejects.size(), 1u);
    EXPECT_EQ(r.rejects[0].code, RejectCode::FieldType);
    EXPECT_EQ(r.rejects[0].field, "input_text");
}

TEST(LoadDataset, MostlyMalformedIsFormatError) {
    const std::string content = std::string(R"({"input_text": "x", "json_schema": {}, "gold": 1})") + "\nnot json\nstill not\n";
    EXPECT_THROW(parse_dataset(content), FormatError);
    // Exactly half malformed is still accepted.
    const auto r = parse_dataset(std::string(R"({"input_text": "x", "json_schema": {}, "gold": 1})") + "\nnot json\n");
    EXPECT_EQ(r.records.size(), 1u);
    EXPECT_EQ(r.rejects[0].code, RejectCode::LineUnparsable);
}

TEST(LoadDataset, EmptyContentLoadsNothing) {
    const auto r = parse_dataset("");
    EXPECT_TRUE(r.records.empty());
    EXPECT_TRUE(r.rejects.empty());
}

TEST(LoadDataset, FromDiskAndMissingFile) {
    const auto path = temp_file("structeval_dataset_test.jsonl", kThreeLines);
    EXPECT_EQ(load_dataset(path.string()).records.size(), 3u);
    std::filesystem::remove(path);
    EXPECT_THROW(load_dataset(path.string()), IoError);
}

TEST(LoadDataset, RoundTripThroughToJson) {
    const auto r = parse_dataset(testsupport::read_fixture("sample_records.jsonl"));
    std::string again;
    for (const auto& rec : r.records) again += serialize_canonical(to_json(rec)) + "\n";
    const auto r2 = parse_dataset(again);
    ASSERT_EQ(r2.records.size(), r.records.size());
    for (std::size_t i = 0; i < r.records.size(); ++i) {
        EXPECT_EQ(r2.records[i].id, r.records[i].id);
        EXPECT_EQ(r2.records[i].input_text, r.records[i].input_text);
        EXPECT_EQ(r2.records[i].json_schema, r.records[i].json_schema);
        EXPECT_EQ(r2.records[i].gold, r.records[i].gold);
    }
}

TEST(LoadPredictions, Basic) {
    const auto r = parse_predictions(
        R"({"id": "a", "prediction_text": "{\"name\": \"x\"}"})" "\n"
        R"({"id": "b", "prediction_text": "not json at all"})" "\n"
        R"({"id": "c"})" "\n");
    ASSERT_EQ(r.records.size(), 2u);
    EXPECT_EQ(r.records[0].prediction_text, R"({"name": "x"})");
    ASSERT_EQ(r.rejects.size(), 1u);
    EXPECT_EQ(r.rejects[0].field, "prediction_text");
}

TEST(LoadPredictions, DuplicateAndTypedFields) {
    const auto r = parse_predictions(
        R"({"id": "a", "prediction_text": "1"})" "\n"
        R"({"id": "a", "prediction_text": "2"})" "\n"
        R"({"id": "b", "prediction_text": "3"})" "\n"
        R"({"id": 7, "prediction_text": "4"})" "\n");
    ASSERT_EQ(r.records.size(), 2u);
    ASSERT_EQ(r.rejects.size(), 2u);
    EXPECT_EQ(r.rejects[0].code, RejectCode::DuplicateId);
    EXPECT_EQ(r.rejects[1].code, RejectCode::FieldType);
}

TEST(LoadPredictions, FixtureFile) {
    const auto r = load_predictions(testsupport::fixture_path("eval_predictions.jsonl"));
    EXPECT_EQ(r.records.size(), 11u);
    EXPECT_TRUE(r.rejects.empty());
    EXPECT_THROW(load_predictions(testsupport::fixture_path("no_such_file.jsonl")), IoError);
}
