const m0 = require('express');
const m1 = require('gh');
