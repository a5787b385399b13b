const m0 = require('left-pad');
const m1 = require('lodash');
