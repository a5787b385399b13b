const m0 = require('request');
