#include "test_util.hpp"

#include <synrag/syntax.hpp>

using namespace synrag;

namespace {

const char* kAql = R"({"platform": "qradar", "keywords": ["SELECT", "FROM"], "fields": ["sourceIP", "Process Name"],
  "functions": ["COUNT"], "databases": ["events"]})";
const char* kYaral = R"({"platform": "secops", "sections": ["meta", "events", "match", "outcome", "condition"],
  "functions": ["re.capture"], "udm_fields": ["metadata.event_type"]})";

}  // namespace

TEST_SUITE("syntax") {
    TEST_CASE("catalogs load with their components") {
        const auto aql = parse_catalog(kAql, Platform::qradar);
        CHECK(aql.platform() == Platform::qradar);
        CHECK(aql.component_names().size() == 4);
        CHECK(allowed_tokens(aql, "keywords") == std::vector<std::string>{"SELECT", "FROM"});
        const auto yaral = parse_catalog(kYaral, Platform::secops);
        CHECK(is_member(yaral, "functions", "re.capture"));
        CHECK_ERROR_CODE(yaral.aql(), ErrorCode::PlatformMismatch);
    }

    TEST_CASE("membership case rules") {
        const auto aql = parse_catalog(kAql, Platform::qradar);
        CHECK(is_member(aql, "keywords", "select"));
        CHECK(is_member(aql, "functions", "count"));
        CHECK(is_member(aql, "databases", "EVENTS"));
        CHECK_FALSE(is_member(aql, "fields", "sourceip"));
        CHECK(is_member(aql, "fields", "sourceIP"));
        const auto yaral = parse_catalog(kYaral, Platform::secops);
        CHECK(is_member(yaral, "udm_fields", "metadata.event_type"));
        CHECK_FALSE(is_member(yaral, "udm_fields", "Metadata.event_type"));
        CHECK_FALSE(is_member(yaral, "functions", "RE.CAPTURE"));
    }

    TEST_CASE("unknown components") {
        const auto aql = parse_catalog(kAql, Platform::qradar);
        CHECK_ERROR_CODE(allowed_tokens(aql, "sections"), ErrorCode::UnknownComponent);
        CHECK_ERROR_CODE(is_member(aql, "udm_fields", "x"), ErrorCode::UnknownComponent);
    }

    TEST_CASE("malformed catalogs") {
        CHECK_ERROR_CODE(parse_catalog("{", Platform::qradar), ErrorCode::MalformedCatalog);
        CHECK_ERROR_CODE(parse_catalog(kAql, Platform::secops), ErrorCode::PlatformMismatch);
        CHECK_ERROR_CODE(parse_catalog(R"({"platform":"qradar","keywords":["A"],"fields":["f"],"functions":[],"databases":["events"]})",
                                       Platform::qradar),
                         ErrorCode::EmptyComponent);
        CHECK_ERROR_CODE(parse_catalog(R"({"platform":"qradar","keywords":["A","a"],"fields":["f"],"functions":["F"],"databases":["events"]})",
                                       Platform::qradar),
                         ErrorCode::MalformedCatalog);
        CHECK_ERROR_CODE(parse_catalog(R"({"platform":"secops","sections":["meta","condition","events","match","outcome"],"functions":["f.g"],"udm_fields":["a.b"]})",
                                       Platform::secops),
                         ErrorCode::MalformedCatalog);
        CHECK_ERROR_CODE(load_catalog(testutil::data_dir() / "catalogs" / "nope.json", Platform::qradar),
                         ErrorCode::IoError);
    }

    TEST_CASE("shipped catalogs") {
        const auto aql = load_catalog(testutil::data_dir() / "catalogs" / "qradar_aql.json", Platform::qradar);
        const auto yaral = load_catalog(testutil::data_dir() / "catalogs" / "secops_yaral.json", Platform::secops);
        CHECK(is_member(yaral, "functions", "re.capture"));
        CHECK(allowed_tokens(yaral, "sections") ==
              std::vector<std::string>{"meta", "events", "match", "outcome", "condition"});
        CHECK(&allowed_tokens(aql, "fields") == &allowed_tokens(aql, "fields"));
    }
}
