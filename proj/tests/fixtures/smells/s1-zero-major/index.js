const m0 = require('tiny');
const m1 = require('unstable');
const m2 = require('slim');
