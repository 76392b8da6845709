// Generated by tests/oracle/gen_golden.py.
#![allow(dead_code)]

/// (master_seed, domain, a, b, first five next_u64 outputs)
pub const STREAMS: &[(u64, u64, u32, u32, [u64; 5])] = &[
    (0, 1, 0, 0, [5039149621571014048, 5946306232561421022, 5170433975094758129, 17048061310126800524, 5278421568069111103]),
    (42, 1, 0, 0, [6744147766271468218, 10940861636503080032, 5462159100569303155, 4437020919881818180, 10909156062098839319]),
    (42, 1, 3, 7, [17966600860354421074, 9379012671460176145, 15035660241775714822, 14160217603959304880, 5859764088953271867]),
    (42, 2, 0, 0, [13346508298577994933, 6225340602857021627, 15944500451814017134, 11037656792526033048, 6807889678304005942]),
    (18446744073709551615, 5, 4294967295, 1, [2043654218393225747, 14995562763820236673, 15507491789778547201, 142944304809905318, 4002982857065157099]),
    (7, 3, 1, 12345, [3574063984441697681, 4580796394328129705, 8587273780361987048, 7641875452063164718, 17462108804680790703]),
];

/// (master_seed, bound, first eight below(bound) outputs) on the Derive domain, stream 0
pub const BELOW: &[(u64, u64, [u64; 8])] = &[
    (1, 2, [1, 1, 1, 1, 1, 0, 1, 1]),
    (1, 10, [5, 9, 9, 7, 9, 1, 9, 7]),
    (9, 1000, [175, 359, 976, 477, 657, 360, 546, 153]),
    (9, 13835058055282163713, [2428582807096451076, 4976292652966140948, 13514529159061062378, 6611558116717026897, 4989379490118332023, 7561888157340922023, 5218872598690337311, 1668264743787407190]),
];

/// (k, master_seed, shard_index, permutation_index, mapping)
pub const PERMUTATIONS: &[(usize, u64, u32, u32, &[usize])] = &[
    (2, 42, 0, 0, &[1, 0]),
    (5, 42, 0, 0, &[4, 3, 0, 2, 1]),
    (10, 42, 0, 0, &[8, 0, 6, 4, 7, 9, 1, 2, 5, 3]),
    (10, 42, 0, 1, &[1, 2, 9, 4, 5, 7, 6, 0, 8, 3]),
    (10, 42, 1, 0, &[5, 8, 6, 9, 7, 0, 4, 1, 3, 2]),
    (20, 7, 3, 250, &[11, 18, 7, 17, 6, 9, 0, 13, 19, 14, 5, 12, 3, 16, 4, 10, 8, 1, 15, 2]),
    (4, 0, 0, 0, &[3, 2, 0, 1]),
];
