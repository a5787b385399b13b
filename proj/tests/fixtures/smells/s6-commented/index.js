// const a = require('a');
/* import a from 'a' */
const s = 'require("a")';
