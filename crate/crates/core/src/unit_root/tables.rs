//! Simulated Dickey-Fuller τ quantiles.
//!
//! Generated by `examples/df_tables.rs` with 500000 replications per sample
//! size: a driftless Gaussian random walk started at zero, the lag-free test
//! regression on `n` observations. Rows are indexed by deterministic case
//! (none, constant, constant + trend), then sample size, then probability.

pub const SAMPLE_SIZES: [usize; 8] = [25, 50, 100, 250, 500, 1000, 2500, 5000];

pub const PROBS: [f64; 27] = [
    0.0001,
    0.0005,
    0.001,
    0.005,
    0.01,
    0.025,
    0.05,
    0.075,
    0.1,
    0.15,
    0.2,
    0.3,
    0.4,
    0.5,
    0.6,
    0.7,
    0.8,
    0.85,
    0.9,
    0.925,
    0.95,
    0.975,
    0.99,
    0.995,
    0.999,
    0.9995,
    0.9999,
];

pub const QUANTILES: [[[f64; 27]; 8]; 3] = [
    [
        [-4.4268, -3.7953, -3.5191, -2.9156, -2.6458, -2.2607, -1.9498, -1.7548, -1.6067, -1.3813, -1.2092, -0.9373, -0.7049, -0.4716, -0.2094, 0.0835, 0.4326, 0.6456, 0.9206, 1.0996, 1.3294, 1.6922, 2.1271, 2.4419, 3.1200, 3.3953, 3.9797],
        [-4.1495, -3.6598, -3.4148, -2.8629, -2.6099, -2.2478, -1.9464, -1.7540, -1.6106, -1.3900, -1.2203, -0.9510, -0.7176, -0.4841, -0.2241, 0.0706, 0.4212, 0.6398, 0.9143, 1.0889, 1.3150, 1.6648, 2.0823, 2.3646, 2.9630, 3.2325, 3.7376],
        [-3.9924, -3.5339, -3.3304, -2.8207, -2.5854, -2.2368, -1.9421, -1.7568, -1.6139, -1.3974, -1.2288, -0.9575, -0.7250, -0.4943, -0.2338, 0.0608, 0.4090, 0.6241, 0.8945, 1.0696, 1.2939, 1.6441, 2.0529, 2.3301, 2.9141, 3.1433, 3.5953],
        [-3.8534, -3.5038, -3.3026, -2.8024, -2.5667, -2.2283, -1.9431, -1.7551, -1.6142, -1.4005, -1.2325, -0.9624, -0.7290, -0.4975, -0.2362, 0.0573, 0.4075, 0.6214, 0.8930, 1.0644, 1.2859, 1.6280, 2.0273, 2.2939, 2.8408, 3.0639, 3.4854],
        [-3.9259, -3.4924, -3.2811, -2.8031, -2.5654, -2.2301, -1.9420, -1.7537, -1.6160, -1.4014, -1.2330, -0.9619, -0.7305, -0.5004, -0.2401, 0.0576, 0.4062, 0.6217, 0.8878, 1.0638, 1.2831, 1.6257, 2.0192, 2.2782, 2.8499, 3.0845, 3.5827],
        [-3.9403, -3.4799, -3.2922, -2.7989, -2.5596, -2.2270, -1.9434, -1.7586, -1.6186, -1.4026, -1.2325, -0.9624, -0.7298, -0.4981, -0.2379, 0.0549, 0.4029, 0.6184, 0.8884, 1.0590, 1.2805, 1.6180, 2.0068, 2.2688, 2.8027, 3.0309, 3.4573],
        [-3.8975, -3.4946, -3.2923, -2.8005, -2.5670, -2.2304, -1.9433, -1.7560, -1.6152, -1.4010, -1.2334, -0.9633, -0.7306, -0.4987, -0.2385, 0.0543, 0.4046, 0.6198, 0.8903, 1.0624, 1.2858, 1.6312, 2.0189, 2.2849, 2.8208, 3.0405, 3.5438],
        [-3.9456, -3.4606, -3.2679, -2.7833, -2.5588, -2.2270, -1.9433, -1.7571, -1.6170, -1.4032, -1.2354, -0.9636, -0.7336, -0.5038, -0.2441, 0.0520, 0.4030, 0.6183, 0.8876, 1.0609, 1.2841, 1.6314, 2.0231, 2.2958, 2.8476, 3.0696, 3.5066],
    ],
    [
        [-5.6867, -5.0094, -4.7121, -4.0098, -3.7186, -3.3137, -2.9866, -2.7828, -2.6329, -2.4070, -2.2337, -1.9619, -1.7409, -1.5352, -1.3292, -1.0982, -0.8069, -0.6185, -0.3724, -0.2111, 0.0000, 0.3206, 0.7052, 0.9816, 1.5633, 1.7788, 2.3357],
        [-5.1183, -4.5844, -4.3715, -3.8305, -3.5730, -3.2167, -2.9215, -2.7387, -2.5992, -2.3879, -2.2250, -1.9668, -1.7501, -1.5496, -1.3467, -1.1211, -0.8332, -0.6441, -0.4022, -0.2435, -0.0359, 0.2853, 0.6629, 0.9223, 1.4893, 1.7452, 2.2222],
        [-4.8423, -4.4112, -4.2274, -3.7204, -3.4974, -3.1671, -2.8908, -2.7188, -2.5853, -2.3830, -2.2247, -1.9709, -1.7582, -1.5600, -1.3583, -1.1350, -0.8500, -0.6643, -0.4208, -0.2622, -0.0539, 0.2585, 0.6291, 0.8859, 1.4374, 1.6255, 2.0354],
        [-4.7329, -4.2893, -4.1134, -3.6796, -3.4528, -3.1356, -2.8719, -2.7013, -2.5716, -2.3760, -2.2201, -1.9687, -1.7593, -1.5616, -1.3627, -1.1401, -0.8586, -0.6733, -0.4329, -0.2775, -0.0736, 0.2476, 0.6196, 0.8750, 1.3925, 1.5911, 1.9870],
        [-4.6685, -4.3230, -4.1095, -3.6591, -3.4412, -3.1239, -2.8621, -2.6939, -2.5649, -2.3687, -2.2159, -1.9675, -1.7589, -1.5624, -1.3622, -1.1407, -0.8577, -0.6742, -0.4327, -0.2755, -0.0683, 0.2456, 0.6115, 0.8566, 1.3638, 1.5694, 2.0101],
        [-4.6574, -4.2835, -4.0931, -3.6517, -3.4347, -3.1196, -2.8584, -2.6919, -2.5658, -2.3706, -2.2173, -1.9709, -1.7615, -1.5665, -1.3669, -1.1455, -0.8641, -0.6801, -0.4403, -0.2825, -0.0774, 0.2363, 0.6051, 0.8542, 1.3862, 1.5791, 1.9935],
        [-4.6285, -4.2580, -4.0941, -3.6473, -3.4366, -3.1290, -2.8649, -2.6954, -2.5672, -2.3714, -2.2180, -1.9706, -1.7618, -1.5660, -1.3669, -1.1437, -0.8622, -0.6769, -0.4396, -0.2847, -0.0780, 0.2385, 0.6090, 0.8705, 1.3925, 1.5996, 2.0158],
        [-4.7002, -4.3164, -4.1062, -3.6491, -3.4321, -3.1176, -2.8581, -2.6900, -2.5622, -2.3673, -2.2150, -1.9702, -1.7613, -1.5655, -1.3671, -1.1451, -0.8645, -0.6791, -0.4408, -0.2861, -0.0806, 0.2348, 0.6042, 0.8595, 1.3945, 1.6004, 1.9942],
    ],
    [
        [-6.4370, -5.7666, -5.4388, -4.7081, -4.3834, -3.9500, -3.6052, -3.3947, -3.2396, -3.0092, -2.8309, -2.5590, -2.3394, -2.1418, -1.9488, -1.7474, -1.5076, -1.3528, -1.1467, -1.0076, -0.8201, -0.5273, -0.1743, 0.0754, 0.5897, 0.8005, 1.2524],
        [-5.6999, -5.1854, -4.9669, -4.4030, -4.1518, -3.7947, -3.5031, -3.3194, -3.1811, -2.9728, -2.8127, -2.5595, -2.3502, -2.1606, -1.9745, -1.7778, -1.5448, -1.3952, -1.1979, -1.0624, -0.8800, -0.5942, -0.2468, -0.0030, 0.4776, 0.6814, 1.1202],
        [-5.4337, -4.9740, -4.7771, -4.2756, -4.0438, -3.7239, -3.4526, -3.2820, -3.1522, -2.9534, -2.8000, -2.5569, -2.3548, -2.1697, -1.9878, -1.7941, -1.5645, -1.4175, -1.2219, -1.0904, -0.9110, -0.6300, -0.2937, -0.0601, 0.4315, 0.6362, 1.0851],
        [-5.2194, -4.8360, -4.6682, -4.2107, -3.9944, -3.6873, -3.4286, -3.2638, -3.1373, -2.9459, -2.7954, -2.5564, -2.3579, -2.1748, -1.9957, -1.8035, -1.5728, -1.4264, -1.2352, -1.1064, -0.9296, -0.6453, -0.3086, -0.0820, 0.4157, 0.6213, 1.0646],
        [-5.1939, -4.7817, -4.6231, -4.1857, -3.9778, -3.6694, -3.4152, -3.2529, -3.1288, -2.9418, -2.7919, -2.5564, -2.3596, -2.1776, -1.9980, -1.8074, -1.5785, -1.4334, -1.2443, -1.1124, -0.9363, -0.6543, -0.3196, -0.0871, 0.3956, 0.5908, 0.9924],
        [-5.1427, -4.7835, -4.6176, -4.1697, -3.9651, -3.6676, -3.4143, -3.2506, -3.1277, -2.9391, -2.7924, -2.5563, -2.3611, -2.1808, -2.0022, -1.8107, -1.5823, -1.4370, -1.2447, -1.1151, -0.9391, -0.6591, -0.3210, -0.0849, 0.4081, 0.6153, 0.9970],
        [-5.1351, -4.7642, -4.6024, -4.1798, -3.9678, -3.6674, -3.4152, -3.2510, -3.1291, -2.9423, -2.7940, -2.5583, -2.3611, -2.1802, -2.0013, -1.8087, -1.5808, -1.4356, -1.2422, -1.1126, -0.9361, -0.6538, -0.3137, -0.0828, 0.3942, 0.5582, 0.9481],
        [-5.1879, -4.7834, -4.6095, -4.1676, -3.9625, -3.6568, -3.4066, -3.2476, -3.1245, -2.9374, -2.7907, -2.5560, -2.3588, -2.1783, -1.9997, -1.8092, -1.5813, -1.4359, -1.2429, -1.1151, -0.9387, -0.6551, -0.3210, -0.0950, 0.3916, 0.5699, 0.9935],
    ],
];
