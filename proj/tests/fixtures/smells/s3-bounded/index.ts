import q from 'q';
import r from 'r';
