// Records range-evaluation verdicts from the npm `semver` package into a
// JSON fixture replayed by the C++ conformance tests.
//
//   npm install semver@7
//   node tools/corpus/record_semver_corpus.js > tests/fixtures/semver_corpus.json
'use strict'

const semver = require('semver')

const ranges = [
  '', '*', 'x', 'X', '1', '1.x', '1.2', '1.2.x', '1.2.*', '1.x.x', '1.*.*',
  '1.2.3', '=1.2.3', 'v1.2.3', '=v1.2.3', ' 1.2.3 ', '2.1.x', '0.x', '0.0.x',
  '^1.2.3', '^1.2', '^1', '^1.x', '^0.2.3', '^0.0.3', '^0.0', '^0.x', '^0.0.x',
  '^0.1.x', '^1.2.x', '^v1.2.3', '^1.2.3-beta.2', '^0.0.3-beta', '^0.2.3-rc.1',
  '^1.0.0-0', '^ 1.2.3', '^*',
  '~1.2.3', '~1.2', '~1', '~>1.2.3', '~>1.2', '~0.2.3', '~1.2.3-beta.2',
  '~ 1.2.3', '~2.1.3', '~1.x', '~0.0.1', '~*',
  '>1.2.3', '>=1.2.3', '<1.2.3', '<=1.2.3', '> 1.2.3', '>= 1.2.3 < 2.0.0',
  '>=1.2.3 <2.0.0', '>1.2', '>1', '<1.2', '<=1.2', '<=1', '>=1.2', '>=1.x',
  '<1.x', '<=1.2.x', '>*', '<*', '>=*', '=1.2', '=1.x', '>=v1.2.3',
  '>=1.2.3-alpha.3', '<1.2.3-alpha.3', '>1.2.3-beta', '<=1.2.3-beta.2',
  '1.2.3 - 2.3.4', '1.2 - 2.3.4', '1.2.3 - 2.3', '1.2.3 - 2', '1 - 2',
  '1.2.3-beta - 2.0.0', '1.2.3 - 2.0.0-rc.1', '* - 2.0.0', '1.2.3 - *',
  '>=1.0.0 || <0.5.0', '^1.2.3 || ^2.0.0', '1.2.3 || 2.3.4',
  '~1.2.1 >=1.2.3', '>=1.2.3 <1.2.3', '<0.0.0-0', '>=0.0.0', '>=0.0.0-0',
  '* || 1.2.3-beta', '>=0.0.0 || 1.2.3-beta', '1.2.3-alpha', '1.2.3-beta.2',
  '1.2.3+build', '^1.2.3+build.5', '>=1.2.3-beta <1.3.0',
  '1.x || >=2.5.0 || 5.0.0 - 7.2.3', '>= 1.2.3 || <= 0.5.0',
  '  ^1.2.3   <1.5.0  ', '^1.2.3 ~1.4.0', '>=0.2.0 <0.3.0', '^0.2.3 || ^1.0.0',
  '<2.0.0-0', '>=1.0.0-rc.1 <1.0.0', '^2.0.0-rc.1', '~2.0.0-0',
  '0.2.3', '>=0.1.0', '>2.3.4 || <0.2.0', '1.2.3 1.2.4',
  // invalid inputs
  'latest', 'next', 'beta', '1.2.3.4', '01.2.3', '^01.2', 'abc', '>=a', '~',
  '^', '1.2.3 -2.0.0', '1.x.2', 'x.1', '>=1.2.3<2', '1.2.3-', '^1.2.3-01',
  '>=', '1.2.3 - ', 'git+https://github.com/a/b.git', 'a/b',
]

const versions = [
  '0.0.0', '0.0.1', '0.0.2', '0.0.3', '0.0.3-beta', '0.0.4', '0.1.0', '0.1.5',
  '0.2.0', '0.2.3-rc.1', '0.2.3', '0.2.4', '0.3.0', '0.4.9', '0.9.9',
  '1.0.0-0', '1.0.0-alpha', '1.0.0-rc.1', '1.0.0', '1.0.1', '1.1.9', '1.2.0',
  '1.2.2', '1.2.3-alpha', '1.2.3-alpha.3', '1.2.3-alpha.4', '1.2.3-beta',
  '1.2.3-beta.2', '1.2.3-beta.3', '1.2.3', '1.2.4-alpha', '1.2.4', '1.3.0',
  '1.4.0', '1.4.5', '1.5.0', '1.9.9', '2.0.0-0', '2.0.0-rc.1', '2.0.0',
  '2.1.0', '2.1.3', '2.1.9', '2.2.0', '2.3.4', '2.3.5', '2.4.0-beta', '2.5.0',
  '3.0.0', '5.0.0', '7.2.3', '7.2.4', '10.0.0',
]

// Small deterministic LCG so the subset selection is reproducible.
let state = 20200112
const rand = () => {
  state = (state * 1103515245 + 12345) % 2147483648
  return state / 2147483648
}

const validity = []
const satisfies = []
const maxSatisfying = []

for (const range of ranges) {
  const valid = semver.validRange(range) !== null
  validity.push({ range, valid, desugared: valid ? semver.validRange(range) : null })
  if (!valid) {
    continue
  }
  for (const includePrerelease of [false, true]) {
    for (const version of versions) {
      satisfies.push({
        range,
        version,
        include_prerelease: includePrerelease,
        expected: semver.satisfies(version, range, { includePrerelease }),
      })
    }
  }
  const lists = [versions.slice(), versions.filter(v => !v.includes('-'))]
  lists.push(versions.filter(() => rand() < 0.3))
  lists.push(versions.filter(() => rand() < 0.1))
  for (const list of lists) {
    for (const includePrerelease of [false, true]) {
      maxSatisfying.push({
        range,
        versions: list,
        include_prerelease: includePrerelease,
        expected: semver.maxSatisfying(list, range, { includePrerelease }),
      })
    }
  }
}

const versionTexts = [
  '1.2.3', '3.4.1', '1.0.0-alpha.1+build5', 'v1.2.3', '=1.2.3', '  1.2.3  ',
  '=v1.2.3', '0.0.0', '1.0.0-0', '1.0.0-x.7.z.92', '1.0.0+20130313144700',
  '1.0.0-beta+exp.sha.5114f85', '10.20.30', '1.2', '1', '1.2.3.4', '01.2.3',
  '1.02.3', '1.2.3-01', '1.2.3-', '1.2.3+', '1.2.3-a..b', 'a.b.c', '',
  '1.2.3-0a', '1.2.3--', '1.2.3-alpha.-1', '9007199254740991.0.0',
  '9007199254740992.0.0', '1.2.3 4', 'v', '>1.2.3',
]
const parse = versionTexts.map(text => {
  // Same leniency as semver.clean(), but keeps build metadata.
  const v = semver.parse(text.trim().replace(/^[=v]+/, ''))
  return {
    text,
    expected: v === null ? null : {
      major: v.major,
      minor: v.minor,
      patch: v.patch,
      prerelease: v.prerelease.map(String),
      build: v.build,
    },
  }
})

const ordered = versions.slice().sort(semver.compare)

const section = (name, rows, last) =>
  ` "${name}": [\n` + rows.map(r => '  ' + JSON.stringify(r)).join(',\n') +
  `\n ]${last ? '' : ','}\n`

process.stdout.write('{\n' +
  ` "generator": ${JSON.stringify('semver@' + require('semver/package.json').version)},\n` +
  section('validity', validity) +
  section('satisfies', satisfies) +
  section('max_satisfying', maxSatisfying) +
  section('parse_version', parse) +
  ` "sorted_versions": ${JSON.stringify(ordered)}\n}\n`)
