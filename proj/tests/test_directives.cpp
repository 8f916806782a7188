#include <gtest/gtest.h>

#include <set>

#include "govtree/directives.hpp"

namespace govtree {
namespace {

TEST(Directives, SignatureHasFourteenDistinctTags) {
  std::set<std::string_view> tags;
  for (auto k : all_directive_kinds()) tags.insert(directive_tag(k));
  EXPECT_EQ(tags.size(), 14u);
  EXPECT_EQ(directive_kind_from_tag("MCPCall"), DirectiveKind::MCPCall);
  EXPECT_FALSE(directive_kind_from_tag("Nope"));
}

TEST(Directives, CanonicalEncoding) {
  EXPECT_EQ(encode_directive(llm_call("gpt", "hello")), "LLMCall{model=gpt,prompt=hello}");
  EXPECT_EQ(encode_directive(db_op("")), "DBOp{query=}");
  // Space, '=', ',', '%', braces and newline are percent-escaped.
  EXPECT_EQ(encode_directive(observability("a b=c,d%{}\n")),
            "Observability{message=a%20b%3Dc%2Cd%25%7B%7D%0A}");
}

TEST(Directives, DecodeInvertsEncode) {
  std::vector<DirectiveEvent> samples = {
      http_request("GET", "http://x/?a=1&b=2", "{\"k\": [1, 2]}"),
      file_op("write", "/tmp/a b", "line1\nline2"),
      mcp_call("srv", "tool", ""),
      websocket_op("send", "ws://h", "%41"),
  };
  for (const auto& d : samples) EXPECT_EQ(decode_directive(encode_directive(d)), d);
}

TEST(Directives, DecodeRejectsMalformedText) {
  EXPECT_THROW(decode_directive("LLMCall{model=a}"), ParseError);
  EXPECT_THROW(decode_directive("LLMCall{prompt=a,model=b}"), ParseError);
  EXPECT_THROW(decode_directive("Unknown{x=1}"), ParseError);
  EXPECT_THROW(decode_directive("DBOp{query=a,extra=b}"), ParseError);
  EXPECT_THROW(decode_directive("DBOp"), ParseError);
}

TEST(Directives, FieldCountIsChecked) {
  EXPECT_THROW(DirectiveEvent(DirectiveKind::DBOp, {"a", "b"}), std::invalid_argument);
  EXPECT_EQ(DirectiveEvent(DirectiveKind::DBOp, {"q"}).field("query"), "q");
}

TEST(Directives, CapabilityTable) {
  EXPECT_EQ(capability_for_directive(DirectiveKind::LLMCall), Capability::CapComputeLLMReason);
  EXPECT_EQ(capability_for_directive(DirectiveKind::GraphQLRequest), Capability::CapHTTP);
  EXPECT_EQ(capability_for_directive(DirectiveKind::EmitEvent), Capability::CapBroadcast);
  EXPECT_EQ(capability_for_directive(DirectiveKind::MCPCall), Capability::CapMachineCall);
  EXPECT_FALSE(capability_for_directive(DirectiveKind::Observability));
  EXPECT_FALSE(capability_for_directive(DirectiveKind::RecordStep));
  std::size_t bookkeeping = 0;
  for (auto k : all_directive_kinds()) bookkeeping += capability_for_directive(k) ? 0 : 1;
  EXPECT_EQ(bookkeeping, 2u);
}

TEST(Directives, AnswerTypes) {
  EXPECT_EQ(directive_answer_type(DirectiveKind::GraphQLRequest), ResponseKind::HTTPResponse);
  EXPECT_EQ(directive_answer_type(DirectiveKind::MCPCall), ResponseKind::CallMachineResult);
  EXPECT_FALSE(directive_answer_type(DirectiveKind::Broadcast));
}

// Published FNV-1a 64-bit vectors.
TEST(Directives, HashTextIsFnv1a64) {
  EXPECT_EQ(hash_text(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(hash_text("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(hash_text("foobar"), 0x85944171f73967e8ULL);
}

TEST(Directives, MockAnswersAreDeterministicAndTyped) {
  auto d = memory_op("get", "k", "");
  Value a = mock_answer(3, d);
  EXPECT_EQ(a, mock_answer(3, d));
  ASSERT_TRUE(a.is_response());
  EXPECT_EQ(a.as_response().kind, ResponseKind::MemoryResult);
  EXPECT_TRUE(mock_answer(3, record_step("s", "d")).is_unit());
}

TEST(Directives, SamplerGivesRequestedCount) {
  ResponseSampler s(9, 3);
  EXPECT_EQ(s(llm_call("m", "p")).size(), 3u);
  EXPECT_EQ(s(observability("o")), std::vector<Value>{Value(Unit{})});
}

}  // namespace
}  // namespace govtree
