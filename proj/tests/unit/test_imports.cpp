#include <doctest.h>

#include "depwatch/imports.hpp"
#include "temp_dir.hpp"

#include <set>

using namespace depwatch::imports;

namespace {

std::vector<std::string> specifiers(std::string_view src) {
    std::vector<std::string> out;
    for (const auto& i : scan_source(src).imports) out.push_back(i.specifier);
    return out;
}

using Specs = std::vector<std::string>;

}  // namespace

TEST_CASE("recognised import forms") {
    CHECK(specifiers("const _ = require('lodash');") == Specs{"lodash"});
    CHECK(specifiers("import x from '@scope/pkg/util';") == Specs{"@scope/pkg/util"});
    CHECK(specifiers("import 'side-effect';") == Specs{"side-effect"});
    CHECK(specifiers("import {a, b as c} from \"multi\";") == Specs{"multi"});
    CHECK(specifiers("import * as ns from 'ns';") == Specs{"ns"});
    CHECK(specifiers("export {x} from 're-export';") == Specs{"re-export"});
    CHECK(specifiers("export * from 'star';") == Specs{"star"});
    CHECK(specifiers("const m = await import('dyn');") == Specs{"dyn"});
    CHECK(specifiers("import type {T} from 'types-only';") == Specs{"types-only"});
    CHECK(specifiers("import {\n  a,\n  b\n} from 'split-lines';") == Specs{"split-lines"});
}

TEST_CASE("non-imports are ignored") {
    CHECK(specifiers("// require('commented')").empty());
    CHECK(specifiers("/* import x from 'block' */").empty());
    CHECK(specifiers("const s = \"require('in-string')\";").empty());
    CHECK(specifiers("obj.require('method');").empty());
    CHECK(specifiers("export function f() { return 'from'; }").empty());
    CHECK(specifiers("const t = `import x from 'tpl'`;").empty());
    CHECK(specifiers("const re = /require('x')/;").empty());
}

TEST_CASE("template substitutions are still scanned") {
    CHECK(specifiers("const t = `${require('inner')}`;") == Specs{"inner"});
}

TEST_CASE("line numbers and computed specifiers") {
    const auto scan = scan_source("\n\nrequire('a');\nrequire(name);\nimport(`x${y}`);\n");
    REQUIRE(scan.imports.size() == 1);
    CHECK(scan.imports[0].line == 3);
    CHECK(scan.computed_lines == std::vector<std::size_t>{4, 5});
}

TEST_CASE("package_of normalises deep paths and drops non-packages") {
    CHECK(package_of("lodash/fp") == "lodash");
    CHECK(package_of("@scope/pkg/sub") == "@scope/pkg");
    CHECK(package_of("@scope/pkg") == "@scope/pkg");
    CHECK_FALSE(package_of("./local"));
    CHECK_FALSE(package_of("../up"));
    CHECK_FALSE(package_of("/abs/path"));
    CHECK_FALSE(package_of("fs"));
    CHECK_FALSE(package_of("fs/promises"));
    CHECK_FALSE(package_of("node:fs"));
    CHECK_FALSE(package_of("#internal"));
    CHECK_FALSE(package_of("https://cdn.example.com/x.js"));
    CHECK(is_builtin("child_process"));
    CHECK_FALSE(is_builtin("lodash"));
    CHECK(builtin_modules_text().find("crypto") != std::string_view::npos);
}

TEST_CASE("scan_imports walks the tree deterministically") {
    depwatch::testing::TempDir dir;
    dir.write("index.js", "const _ = require('lodash');\nrequire('./local');\nrequire('fs');\n");
    dir.write("lib/a.ts", "import x from '@scope/pkg/util';\nimport y from 'lodash/fp';\n");
    dir.write("lib/b.mjs", "export * from 'chalk';\nimport(dynamicName);\n");
    dir.write("node_modules/ignored/index.js", "require('never');");
    dir.write(".hidden/x.js", "require('never-hidden');");
    dir.write("README.md", "require('not-source')");

    const auto scan = scan_imports(dir.path());
    CHECK(scan.names() == std::set<std::string>{"@scope/pkg", "chalk", "lodash"});
    REQUIRE(scan.packages.at("lodash").size() == 2);
    CHECK(scan.packages.at("lodash")[0].file == "index.js");
    CHECK(scan.packages.at("lodash")[0].line == 1);
    CHECK(scan.packages.at("lodash")[1].file == "lib/a.ts");
    CHECK(scan.notices.size() == 1);

    const auto again = scan_imports(dir.path());
    CHECK(again.names() == scan.names());
    CHECK(again.notices == scan.notices);

    ScanOptions only_ts;
    only_ts.extensions = {".ts"};
    CHECK(scan_imports(dir.path(), only_ts).names() == std::set<std::string>{"@scope/pkg", "lodash"});
}
