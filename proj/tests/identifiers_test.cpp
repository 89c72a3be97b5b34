// Identifier normalization, syntax validation (check digits), and the
// existence cache. Check-digit logic is verified against slow independent
// oracles that enumerate candidate values.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <random>
#include <string>

#include "ocindex/existence.hpp"
#include "ocindex/identifiers.hpp"

using namespace ocindex;

namespace {

// Independent ISSN check character: weights 8..2 over the 7 digits, check
// makes the weighted sum divisible by 11 (10 -> 'X').
char issn_check_oracle(const std::string& seven) {
    int sum = 0;
    for (int i = 0; i < 7; ++i) sum += (8 - i) * (seven[i] - '0');
    int check = (11 - sum % 11) % 11;
    return check == 10 ? 'X' : static_cast<char>('0' + check);
}

// Independent ISBN-10 check character: weights 10..2, check makes the
// weighted sum divisible by 11.
char isbn10_check_oracle(const std::string& nine) {
    int sum = 0;
    for (int i = 0; i < 9; ++i) sum += (10 - i) * (nine[i] - '0');
    int check = (11 - sum % 11) % 11;
    return check == 10 ? 'X' : static_cast<char>('0' + check);
}

// Independent ISBN-13 check digit: alternating weights 1,3 over 12 digits.
char isbn13_check_oracle(const std::string& twelve) {
    int sum = 0;
    for (int i = 0; i < 12; ++i) sum += (i % 2 == 0 ? 1 : 3) * (twelve[i] - '0');
    return static_cast<char>('0' + (10 - sum % 10) % 10);
}

// Independent ISO 7064 mod 11-2 check character over 15 base digits.
char orcid_check_oracle(const std::string& fifteen) {
    int total = 0;
    for (char c : fifteen) total = (total + (c - '0')) * 2;
    int check = (12 - total % 11) % 11;
    return check == 10 ? 'X' : static_cast<char>('0' + check);
}

std::string hyphenate_orcid(const std::string& sixteen) {
    return sixteen.substr(0, 4) + "-" + sixteen.substr(4, 4) + "-" +
           sixteen.substr(8, 4) + "-" + sixteen.substr(12, 4);
}

std::string random_digits(std::mt19937& rng, int n) {
    std::uniform_int_distribution<int> d(0, 9);
    std::string out;
    for (int i = 0; i < n; ++i) out.push_back(static_cast<char>('0' + d(rng)));
    return out;
}

}  // namespace

TEST_CASE("doi normalization strips resolver prefixes and lowercases") {
    auto a = normalize(IdentifierScheme::doi, "doi:10.1000/ABC");
    CHECK(a.value == "10.1000/abc");
    CHECK(a.to_string() == "doi:10.1000/abc");
    auto b = normalize(IdentifierScheme::doi, "https://doi.org/10.1000/abc");
    CHECK(b == a);
    auto c = normalize(IdentifierScheme::doi, "http://dx.doi.org/10.1000/Abc");
    CHECK(c == a);
    CHECK_THROWS_AS(normalize(IdentifierScheme::doi, "11.1000/abc"),
                    MalformedIdentifier);
    CHECK_THROWS_AS(normalize(IdentifierScheme::doi, "10.1000"), MalformedIdentifier);
}

TEST_CASE("pmid normalization strips leading zeros") {
    CHECK(normalize(IdentifierScheme::pmid, "0012345").value == "12345");
    CHECK(normalize(IdentifierScheme::pmid, "pmid:12345").value == "12345");
    CHECK_THROWS_AS(normalize(IdentifierScheme::pmid, "12a45"), MalformedIdentifier);
    CHECK_THROWS_AS(normalize(IdentifierScheme::pmid, "0"), MalformedIdentifier);
}

TEST_CASE("pmc, issn, isbn, orcid canonical forms") {
    CHECK(normalize(IdentifierScheme::pmc, "pmc1234").value == "PMC1234");
    CHECK(normalize(IdentifierScheme::issn, "0378-5955").value == "0378-5955");
    CHECK(normalize(IdentifierScheme::issn, "03785955").value == "0378-5955");
    CHECK(normalize(IdentifierScheme::issn, "0000-006x").value == "0000-006X");
    CHECK(normalize(IdentifierScheme::isbn, "978-0-13-468599-1").value ==
          "9780134685991");
    CHECK(normalize(IdentifierScheme::orcid,
                    "https://orcid.org/0000-0001-5366-5194")
              .value == "0000-0001-5366-5194");
}

TEST_CASE("arxiv normalization keeps versions, strips prefix") {
    CHECK(normalize(IdentifierScheme::arxiv, "arXiv:2005.14165v4").value ==
          "2005.14165v4");
    CHECK(normalize(IdentifierScheme::arxiv, "1501.00001").value == "1501.00001");
    CHECK(normalize(IdentifierScheme::arxiv, "math.GT/0309136").value ==
          "math.gt/0309136");
    CHECK_THROWS_AS(normalize(IdentifierScheme::arxiv, "20.14165"),
                    MalformedIdentifier);
}

TEST_CASE("url normalization lowercases scheme and trims trailing slash") {
    CHECK(normalize(IdentifierScheme::url, "HTTPS://Example.org/x/").value ==
          "https://Example.org/x");
    CHECK_THROWS_AS(normalize(IdentifierScheme::url, "not a url"),
                    MalformedIdentifier);
}

TEST_CASE("wikidata and ror token rules") {
    CHECK(normalize(IdentifierScheme::wikidata, "q42").value == "Q42");
    CHECK_THROWS_AS(normalize(IdentifierScheme::wikidata, "42"),
                    MalformedIdentifier);
    CHECK(normalize(IdentifierScheme::ror, "https://ror.org/02mhbdp94").value ==
          "02mhbdp94");
}

TEST_CASE("normalization is idempotent across schemes") {
    const char* samples[] = {
        "doi:10.1093/Bioinformatics/btz375",
        "pmid:0031511",
        "pmc:PMC7894123",
        "issn:2049-3630",
        "isbn:978-0-13-468599-1",
        "orcid:0000-0001-5366-5194",
        "arxiv:arXiv:2005.14165v4",
        "url:HTTP://example.com/a/b/",
        "wikidata:q5",
        "viaf:113230702",
        "ror:02mhbdp94",
        "jid:tanpakushitsu",
    };
    for (const char* sample : samples) {
        std::string_view text = sample;
        auto colon = text.find(':');
        auto scheme = scheme_from_name(text.substr(0, colon));
        REQUIRE(scheme.has_value());
        auto once = normalize(*scheme, text.substr(colon + 1));
        auto twice = normalize(*scheme, once.value);
        CHECK(once == twice);
        // The canonical textual form parses back to itself.
        CHECK(parse_external_id(once.to_string()) == once);
    }
}

TEST_CASE("issn check digit agrees with oracle over many random bodies") {
    std::mt19937 rng(7);
    for (int i = 0; i < 10000; ++i) {
        std::string seven = random_digits(rng, 7);
        char good = issn_check_oracle(seven);
        CHECK(validate_syntax({IdentifierScheme::issn,
                               seven.substr(0, 4) + "-" + seven.substr(4) + good}));
        char bad = good == '0' ? '1' : static_cast<char>(good == 'X' ? '0' : good - 1);
        CHECK_FALSE(validate_syntax(
            {IdentifierScheme::issn,
             seven.substr(0, 4) + "-" + seven.substr(4) + bad}));
    }
    CHECK(validate_syntax({IdentifierScheme::issn, "0378-5955"}));
    CHECK_FALSE(validate_syntax({IdentifierScheme::issn, "0378-5954"}));
}

TEST_CASE("issn accepts exactly one check character per body") {
    std::mt19937 rng(11);
    const char candidates[] = "0123456789X";
    for (int i = 0; i < 2000; ++i) {
        std::string seven = random_digits(rng, 7);
        int accepted = 0;
        for (char c : std::string(candidates, 11))
            if (validate_syntax({IdentifierScheme::issn,
                                 seven.substr(0, 4) + "-" + seven.substr(4) + c}))
                ++accepted;
        CHECK(accepted == 1);
    }
}

TEST_CASE("isbn-10 and isbn-13 check digits agree with oracles") {
    std::mt19937 rng(13);
    for (int i = 0; i < 10000; ++i) {
        std::string nine = random_digits(rng, 9);
        std::string ten = nine + isbn10_check_oracle(nine);
        CHECK(validate_syntax({IdentifierScheme::isbn, ten}));
        ten.back() = ten.back() == '0' ? '5' : '0';
        CHECK_FALSE(validate_syntax({IdentifierScheme::isbn, ten}));

        std::string twelve = "978" + random_digits(rng, 9);
        std::string thirteen = twelve + isbn13_check_oracle(twelve);
        CHECK(validate_syntax({IdentifierScheme::isbn, thirteen}));
        thirteen.back() = thirteen.back() == '9' ? '3' : '9';
        CHECK_FALSE(validate_syntax({IdentifierScheme::isbn, thirteen}));
    }
    CHECK(validate_syntax({IdentifierScheme::isbn, "9780134685991"}));
    CHECK(validate_syntax({IdentifierScheme::isbn, "0306406152"}));
    CHECK_FALSE(validate_syntax({IdentifierScheme::isbn, "0306406153"}));
}

TEST_CASE("orcid checksum agrees with the iso 7064 oracle") {
    std::mt19937 rng(17);
    for (int i = 0; i < 10000; ++i) {
        std::string fifteen = random_digits(rng, 15);
        std::string good = hyphenate_orcid(fifteen + orcid_check_oracle(fifteen));
        CHECK(validate_syntax({IdentifierScheme::orcid, good}));
        std::string bad = good;
        bad.back() = bad.back() == '2' ? '7' : '2';
        CHECK_FALSE(validate_syntax({IdentifierScheme::orcid, bad}));
    }
    CHECK(validate_syntax({IdentifierScheme::orcid, "0000-0001-5366-5194"}));
    CHECK_FALSE(validate_syntax({IdentifierScheme::orcid, "0000-0001-5366-5195"}));
}

TEST_CASE("pmid and doi structural validity") {
    CHECK(validate_syntax({IdentifierScheme::pmid, "1"}));
    CHECK(validate_syntax({IdentifierScheme::pmid, "12345678"}));
    CHECK_FALSE(validate_syntax({IdentifierScheme::pmid, "123456789"}));
    CHECK_FALSE(validate_syntax({IdentifierScheme::pmid, "012"}));
    CHECK(validate_syntax({IdentifierScheme::doi, "10.1000/xyz123"}));
    CHECK_FALSE(validate_syntax({IdentifierScheme::doi, "10./xyz"}));
    CHECK_FALSE(validate_syntax({IdentifierScheme::doi, "10.1000"}));
}

TEST_CASE("existence cache is insert-if-absent with immutable definitives") {
    ValidationCache cache;
    ExternalId id{IdentifierScheme::doi, "10.1/a"};
    CHECK_FALSE(cache.get(id).has_value());

    ExistenceVerdict unknown;
    unknown.status = ExistenceStatus::unknown;
    cache.put(id, unknown);
    REQUIRE(cache.get(id).has_value());
    CHECK(cache.get(id)->status == ExistenceStatus::unknown);

    ExistenceVerdict valid;
    valid.status = ExistenceStatus::valid;
    cache.put(id, valid);  // unknown may be upgraded
    CHECK(cache.get(id)->status == ExistenceStatus::valid);

    ExistenceVerdict invalid;
    invalid.status = ExistenceStatus::invalid;
    cache.put(id, invalid);  // definitive verdicts stick
    CHECK(cache.get(id)->status == ExistenceStatus::valid);
    CHECK(cache.size() == 1);
}

TEST_CASE("existence check consults cache before the client") {
    ValidationCache cache;
    ExternalId id{IdentifierScheme::pmid, "12345"};
    StubExistenceClient valid_client(ExistenceStatus::valid);
    auto first = check_existence(id, cache, valid_client);
    CHECK(first.status == ExistenceStatus::valid);
    CHECK(first.origin == VerdictOrigin::external_service);

    StubExistenceClient invalid_client(ExistenceStatus::invalid);
    auto second = check_existence(id, cache, invalid_client);
    CHECK(second.status == ExistenceStatus::valid);  // served from cache
    CHECK(second.origin == VerdictOrigin::cache);
}

TEST_CASE("url identifiers are accepted on syntax alone") {
    ValidationCache cache;
    ExternalId id{IdentifierScheme::url, "https://hdl.handle.net/10.5555/x"};
    StubExistenceClient client(ExistenceStatus::invalid);
    auto verdict = check_existence(id, cache, client);
    CHECK(verdict.status == ExistenceStatus::valid);
    CHECK(verdict.origin == VerdictOrigin::syntax_only);
}

TEST_CASE("fixture-backed existence client treats the fixture as registry") {
    auto dir = std::filesystem::temp_directory_path() / "ocindex-ident-test";
    std::filesystem::create_directories(dir);
    auto fixture = dir / "registry.tsv";
    {
        std::ofstream out(fixture);
        out << "doi:10.1/known\tvalid\n";
        out << "doi:10.1/retracted\tinvalid\n";
    }
    FixtureExistenceClient client(fixture);
    CHECK(client.lookup({IdentifierScheme::doi, "10.1/known"}) ==
          ExistenceStatus::valid);
    CHECK(client.lookup({IdentifierScheme::doi, "10.1/retracted"}) ==
          ExistenceStatus::invalid);
    CHECK(client.lookup({IdentifierScheme::doi, "10.1/absent"}) ==
          ExistenceStatus::invalid);
    std::filesystem::remove_all(dir);
}

TEST_CASE("validation cache persists verdicts to its append-only file") {
    auto dir = std::filesystem::temp_directory_path() / "ocindex-cache-test";
    std::filesystem::create_directories(dir);
    auto file = dir / "cache.tsv";
    ExternalId id{IdentifierScheme::issn, "0378-5955"};
    {
        ValidationCache cache(file);
        ExistenceVerdict v;
        v.status = ExistenceStatus::valid;
        v.checked_at = std::chrono::system_clock::now();
        cache.put(id, v);
    }
    ValidationCache reloaded(file);
    REQUIRE(reloaded.get(id).has_value());
    CHECK(reloaded.get(id)->status == ExistenceStatus::valid);
    CHECK(reloaded.get(id)->origin == VerdictOrigin::cache);
    std::filesystem::remove_all(dir);
}
