import { x } from '@org/lib/deep/path';
