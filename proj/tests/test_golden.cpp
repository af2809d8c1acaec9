#include <cstdlib>
#include <string>

#include <gtest/gtest.h>

#include "golden_util.hpp"

using namespace redteam;

// Regenerate the committed tree with REDTEAM_REGENERATE_GOLDEN=1 after an
// intentional generator change, then review the diff before committing.
TEST(GoldenPayloads, CommittedTreeMatchesGeneratorByteExactly) {
    testutil::FileTree expected = testutil::golden_tree();
    std::string root = testutil::source_path("data/golden");
    if (std::getenv("REDTEAM_REGENERATE_GOLDEN")) {
        testutil::write_tree(root, expected);
    }
    testutil::FileTree actual = testutil::read_tree(root);

    for (const auto& [rel, content] : expected) {
        auto it = actual.find(rel);
        if (it == actual.end()) {
            ADD_FAILURE() << "missing golden file: " << rel;
            continue;
        }
        EXPECT_EQ(it->second, content) << "golden mismatch: " << rel;
    }
    for (const auto& [rel, content] : actual) {
        EXPECT_EQ(expected.count(rel), 1u) << "stale golden file: " << rel;
    }
    EXPECT_EQ(actual.size(), expected.size());
}

TEST(GoldenPayloads, EveryAttackKindAndLanguageIsRepresented) {
    testutil::FileTree tree = testutil::golden_tree();
    for (const char* lang : {"python", "go"}) {
        for (AttackKind kind : kAllAttackKinds) {
            std::string prefix = std::string(lang) + "/" + attack_kind_key(kind) + "/";
            bool found = false;
            for (const auto& [rel, content] : tree) {
                if (rel.rfind(prefix, 0) == 0) {
                    found = true;
                    break;
                }
            }
            EXPECT_TRUE(found) << "no golden payloads under " << prefix;
        }
    }
}
