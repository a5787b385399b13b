const m0 = require('lodash');
