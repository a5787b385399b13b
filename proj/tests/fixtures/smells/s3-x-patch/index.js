const m0 = require('a');
const m1 = require('b');
const m2 = require('c');
