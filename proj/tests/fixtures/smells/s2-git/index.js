const m0 = require('x');
const m1 = require('y');
const m2 = require('z');
