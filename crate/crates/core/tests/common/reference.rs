// Generated by tests/oracle/gen_special.py and gen_sharded.py (mpmath, 50 digits).
#![allow(dead_code)]

pub const T_SF_TABLE: &[(f64, u32, f64)] = &[
    (0.0, 1, 0.5),
    (0.0, 49, 0.5),
    (1.0, 1, 0.25),
    (-1.0, 1, 0.75),
    (1.0, 10, 0.17044656615102993634),
    (3.4641016151377544, 2, 0.037089950113724273048),
    (2.0, 3, 0.069662984279421588424),
    (-2.5, 5, 0.97275495032881187944),
    (0.5, 7, 0.31620356784464210817),
    (1.6765508919142635, 49, 0.050000000069149075337),
    (2.0096, 49, 0.024998642848326686327),
    (4.0, 49, 0.00010674024457271248164),
    (6.5, 49, 1.9747381451466075666e-8),
    (10.0, 49, 1.0065816959892733835e-13),
    (-3.0, 49, 0.99788205188492770769),
    (12.0, 19, 1.2954473186110996574e-10),
    (25.0, 9, 6.2947251894951840673e-10),
    (40.0, 1, 0.0079560899120258133183),
    (40.0, 2, 0.00031220733609237031875),
    (40.0, 49, 2.2273281630139947066e-39),
    (-40.0, 3, 0.99998280965960542074),
    (1.2, 200, 0.11577943451553298174),
    (3.0, 200, 0.0015215235569529514017),
    (0.01, 100, 0.49602060511721425044),
    (5.0, 4, 0.0037452169406372622807),
    (0.25, 150, 0.40146470494983206778),
    (7.0, 30, 4.4349793336103215849e-8),
    (1.96, 120, 0.026156838222913777163),
];
pub const CHI2_SF_TABLE: &[(f64, u32, f64)] = &[
    (0.0, 1, 1.0),
    (0.0, 4, 1.0),
    (4.605170185988091, 2, 0.1000000000000000227),
    (11.983, 4, 0.017478130338748092739),
    (11.982929094215963, 4, 0.017478661367769959137),
    (1.0, 1, 0.31731050786291410283),
    (3.841458820694124, 1, 0.050000000000000057435),
    (0.5, 3, 0.91889141165467585936),
    (10.0, 10, 0.44049328506521241144),
    (20.0, 10, 0.029252688076961072673),
    (2.0, 10, 0.99634015317265628765),
    (86.0, 86, 0.47971814061377316054),
    (120.0, 86, 0.0090814490236419154948),
    (60.0, 86, 0.98518048455464272336),
    (150.0, 200, 0.99664755850181300811),
    (200.0, 200, 0.48670120172085133514),
    (260.0, 200, 0.002750408367306526277),
    (300.0, 114, 1.1624561926620352345e-18),
    (0.001, 2, 0.99950012497916927056),
    (55.0, 20, 4.1061432754981257864e-5),
    (100.0, 30, 1.8568023365102385923e-9),
    (5.0, 7, 0.6599632296942827055),
    (35.0, 50, 0.94682369614648698407),
];
pub const SHARDED_CASES: &[(&[f64], f64, u32, f64)] = &[
    (&[1.0, 2.0, 3.0], 3.4641016151377545871, 2, 0.037089950113724269217),
    (&[-1.0, 0.0, 1.0], 0.0, 2, 0.5),
    (&[0.5, -0.5, 2.0, -2.0], 0.0, 3, 0.5),
    (&[0.25, 0.5, 0.75, 1.0, 1.25], 4.2426406871192851464, 4, 0.0066177997818413447598),
    (&[-3.0, -2.0, -1.5], -4.9135381491199539538, 2, 0.98049382612047234335),
    (&[-0.394992, 1.406732], 0.56153994729492419483, 1, 0.33713360726278226705),
    (&[3.895546, 6.87676, 2.178006], 3.1448052097268529407, 2, 0.043987777254381479862),
    (&[-0.967738, -0.693427, 0.458322, -0.085845, -0.191311], -1.1919851941208231658, 4, 0.85042472908226275363),
    (&[0.011885, 0.039043, -0.287648, 0.888049, -0.749033, 0.539895, -0.738781, 0.178402, -0.266516, -0.441565], -0.49566841394176459639, 9, 0.68399701681364760633),
    (&[0.712502, -0.120187, -0.233844, 0.453856, 0.411112, -0.434067, 0.799215, -0.2018, 0.407649, -0.573331, -0.218082, 0.413543, 0.849155, -0.09704, -0.086061, 0.224392, -0.584053, 0.504063, -0.401547, 0.996793], 1.2724931779217115078, 19, 0.10927526064089678884),
    (&[-0.144485, -0.328225, -0.793341, -1.260109, -0.363596, -1.568524, -0.803051, -2.596783, 0.76878, -0.472454, -2.363805, -0.638616, 0.009959, 0.943696, 0.220599, -1.594452, -0.272967, 0.137078, 0.232613, -2.212386, 1.276099, -1.04373, 1.182014, -1.245504, -0.111929, 1.394875, -1.336483, 0.399005, -0.312785, -0.288788, 0.548719, -0.673596, -0.900374, 0.36369, 0.624928, 0.333472, -2.839878, 0.123251, -0.229679, -0.598294, -0.075371, 0.336707, 0.945619, -0.851736, 0.316178, -0.074162, -1.584882, 0.56662, 0.397973, -1.442818], -2.5417212272401558885, 49, 0.99287774785195069588),
    (&[-7.153741, 7.480168, 7.733175, -2.837826, -4.209276, 5.021147, 1.168074, 5.529438, 13.074929, -11.126876, -0.648997, -19.634847, -4.997643, 7.188197, 2.113426, -7.749656, -2.090283, -2.013294, -11.176847, -5.507324, -1.585365, -8.275082, 0.459532, 15.602813, 11.806981, 19.255327, 14.815436, -13.686357, -6.142689, -0.554525, -8.859371, 3.798063, 12.842041, 34.268463, 4.969911, -18.001696, -0.288901, -7.515382, 21.747432, 17.087844, 1.224402, -5.22303, -18.768396, -13.596986, 0.875105, 10.967194, -1.892643, 0.940926, 14.763733, 6.003092], 0.73178707786291038519, 49, 0.23389207629753111579),
    (&[-0.938017, -0.043723, 0.294074, -0.181612, 0.191856, -0.126152, -0.488008, 0.558496, -0.420449, -1.042622, -0.368933, 0.010816, -0.330622, 0.597085, 0.379527, -0.11579, -0.467771, -0.455217, -0.211522, -1.47918, -0.159916, -0.110036, -0.112577, -0.703485, -1.086894, -0.284716, -0.210286, -0.775025, 0.021213, 0.081897, -0.982698, -0.639783, -1.090764, -0.991902, -1.471142, -0.171237, -0.454485, -0.188287, -0.397573, -0.660818, -0.221792, -1.106329, 0.501704, -1.067423, -0.374596, -0.007364, -0.86134, -0.423246, -1.066122, -0.73288], -5.7280241967037181576, 49, 0.99999969374721694264),
    (&[2.843075, -3.075805, 0.170884, 0.226197, -0.41957, -0.705572, 0.676133, 0.304601, 2.891878, -3.434176, -3.836826, -0.872318, 6.750607, -2.120234, 10.131128, -4.355931, -6.62576, -5.823114, 0.181523, 2.997932, 2.864447, 4.474998, 1.040719, -0.274685, 1.48218, -0.772075, 0.191533, -2.888411, 0.068186, -3.517511, -1.644248, -2.277362, 0.120625, 1.864601, -3.863017, 3.443081, -5.24211, -0.218402, -2.273578, 5.045752, 1.663299, 0.290224, -2.907285, 0.559865, -0.835574, 0.549144, -2.874107, -1.554315, 2.838461, -1.013681, 0.035065, -2.015068, -0.988123, -1.834144, -3.19745, -0.054387, 2.866887, 4.006649, -3.213434, 1.368785, 7.143158, -7.461031, -2.286761, 1.505971, -0.890347, -5.574256, 2.163804, 2.384571, 3.303039, -2.981743, 2.53522, 3.529592, 5.268395, -2.145631, 4.958639, -0.670313, -2.806807, 1.40411, 0.45364, -0.115815, 5.254077, -0.28509, 0.762617, -1.785516, 3.502934, 0.651272, 2.335337, -1.238103, -1.910683, 4.202239, -3.526846, 1.997107, 1.169152, 1.858829, 1.824044, -1.396545, -1.166199, -0.514327, -0.002816, 1.471831], 0.33374372133418200609, 99, 0.36963941669578189548),
    (&[-0.933831, -1.119108, 2.142728, 1.930883, 1.478945, 1.649603, -3.855596, 4.176877, 3.211028, 1.072845, 0.649586, 3.389215, 0.655184, -8.064503, 1.562599, 1.923336, 4.748294, -2.479291, 0.304217, -6.699896, -5.989069, 5.042675, -0.751652, 4.200527, -0.00391, 0.279977, -6.769389, 2.570046, 7.528271, 1.573416, 0.159397, -3.728143, 3.593332, 0.648941, -4.494891, 2.10049, 0.299023, 0.141399, 0.537999, -0.235731, -0.109117, -5.828094, 2.214909, 0.114888, 5.962079, 2.191142, 0.113414, 0.962364, 5.402297, -2.72583, -2.325252, 3.997625, -4.683274, 1.074266, 5.097423, -2.556398, 2.677034, 0.701221, -1.054955, 0.709496, 3.928652, 3.045802, -0.430391, -4.922281, -1.960332, -3.000944, -0.302841, -3.351492, -1.896839, 2.527509, -0.451637, 1.460369, -1.659921, -3.016538, 1.658432, 0.606985, -1.186373, 1.668889, 5.652089, -4.340263, 2.848257, 0.079198, -0.621976, -2.495002, 1.462955, -3.059619, 4.650588, 2.169046, 2.208896, -2.087338, -0.332925, 2.768658, 0.419427, 0.630353, 4.406213, -0.47106, -3.028746, -0.046241, -1.991986, -5.987482, 0.845564, 1.440853, -0.892238, 0.020031, -0.424598, 0.732639, 2.896344, 3.848154, 0.014203, -0.774255, -0.499891, -0.623713, 2.957886, 1.943667, -2.341346, -5.43546, -0.152712, -1.355224, -0.97027, 2.310525, -0.254621, 4.039385, -2.38041, 1.04707, -0.106649, -2.067988, -0.515936, 0.302487, 2.703851, -4.877778, -5.888926, 9.065474, 1.347932, 1.683356, 13.009603, 1.259745, 0.555322, 2.67349, -3.236659, 0.601894, -1.045026, 2.124127, 3.083356, -3.453825, 7.155178, -1.606371, 3.212345, 3.115253, 2.286505, -2.618392, -0.717636, -1.407756, 1.772908, -0.189488, 2.56482, 2.674605, -2.210709, 5.52328, 2.251336, 2.443066, 1.616762, -3.129253, -6.230605, -3.013164, 2.510466, -1.669809, -1.631614, -1.971164, 3.00808, -4.460707, 5.850491, -0.348789, -3.317845, -0.396435, 1.397306, -0.093353, 2.563632, 1.254134, 5.195103, 2.938777, -3.402404, 3.646536, 1.262987, -0.333906, -0.441831, -2.582712, -5.154215, -0.10908, -0.077157, 1.718166, -0.226788, -0.8707, -0.749685, -2.578453, 4.164864, 5.415125, -2.467662, 5.584386, 0.522881, -2.047047], 1.5639558809925083678, 199, 0.059708378868468614512),
    (&[5.31343, 5.252429, 4.840736, 4.938728, 3.783745, 5.013218, 4.855897, 4.928137, 5.398758, 5.17399], 34.425985777109121253, 9, 3.6343077986205068757e-11),
    (&[-0.64734, 0.555541, 0.068082, 0.465693, 0.8736, 0.799933, 0.622757, 0.68951, -0.174379, 1.48636, -9.2e-05, 0.462875, 0.009442, 2.801269, 0.725448, -1.002036, 0.644787, -0.868605, -0.134582, -0.135962, 0.942577, 0.925446, 1.346026, 0.195995, 1.436425, 0.607501, 0.086638, 0.596541, -0.830476, -0.091251, 1.118082, 0.576887, 0.361145, 0.320047, 0.337911, 0.5995, 1.232556, 1.589543, 0.291015, 0.914193, 1.114403, 0.525388, 0.044908, 0.240997, -0.210786, -0.636753, 1.082742, 2.209245, 0.292577, 1.279637], 4.8904578217537753446, 49, 5.6260180120301619981e-6),
    (&[0.354754, 1.118004, 1.133876, 0.287293, 0.338058, 1.015844, 0.58863, 1.430232, -0.835091, 0.128139, 0.761564, 0.89993, 0.57963, 1.095137, 0.661663, 0.17528, 1.001124, 0.176765, -0.547575, 0.545971, 0.631682, 0.34209, 0.332002, 0.4289, 0.238882, 0.497228, 0.691415, 0.893763, 0.723177, 1.352309], 6.2945094314817619655, 29, 3.561628636632902913e-7),
    (&[-0.78946, -0.272557, 1.706754, 0.083119, -0.521066, 0.046794, -1.333692], -0.42627040425156325494, 6, 0.65761001770390296428),
    (&[0.731663, 0.329288, 1.160538, 0.012781, 0.207508, -0.037671, 0.890891, 0.186706, -0.332059, 0.619753, 0.21062, 0.309759, -0.191737, -0.200267, 0.941955, 1.001942, 0.345183, 0.826687, -0.368834, 0.963776, 1.271396, 1.035053, 1.199563, 0.820675, 0.69694, 1.064881, 0.279139, 0.334696, 0.775679, 0.556992, 0.906177, 1.028547, -0.165518, 0.786687, 0.917845, 1.074728, 0.363122, 0.912166, 0.262886, 1.53939, 0.36605, 0.68324, 0.699701, 0.522172, 0.486551, 0.620119, 0.704736, 0.36284, 1.106805, 1.023212], 9.4130946260777783467, 49, 7.2069509416010942419e-13),
    (&[0.828656, -0.376991, -0.132292, 1.208017, -0.051502, 0.364994, -0.468739, -2.580349, 0.224987, 0.634018, -1.229229, -0.97678, -0.331174, 0.1411, -1.130288, -0.859579, 1.375291, -0.12593, 0.602644, 1.80903, -0.580593, -1.193464, 1.137735, -0.532371, -1.212227, 0.124071, -0.469277, -0.183891, -0.865711, 0.890262, -0.016841, -1.254204, -1.288585, -0.863658, -0.907369, -0.759922, 0.424149, 0.091014, 0.291741, 1.021515, -2.512964, -0.713172, 0.394442, -0.940027, 1.838932, -0.601236, 0.785498, -0.928346, 0.145431, -0.392079], -1.5064879582702157511, 49, 0.93081893824091847413),
];
