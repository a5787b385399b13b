const m0 = require('a');
const m1 = require('b');
