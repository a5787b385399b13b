const m0 = require('lodash');
const m1 = require('jest');
