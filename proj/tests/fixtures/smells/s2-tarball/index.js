const m0 = require('b');
