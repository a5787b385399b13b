const m0 = require('pinned');
