// superkit: simulation of qubit channels and superchannels
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "superkit/linalg.hpp"

// Reference matrices for the bundled replication experiments. The entries are
// stored verbatim as printed (4 decimal places), so the matrices are only
// approximately unitary; pass them through reunitarize() (polar projection)
// before handing them to constructors that enforce exact unitarity.
namespace superkit::refdata {

inline Matrix from_rows(Eigen::Index rows, Eigen::Index cols,
                        std::initializer_list<Complex> vals) {
    if (static_cast<Eigen::Index>(vals.size()) != rows * cols)
        throw std::invalid_argument("from_rows: wrong element count");
    Matrix m(rows, cols);
    auto it = vals.begin();
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = *it++;
    return m;
}

/// Polar projection onto the unitary group; removes the 4-decimal rounding.
inline Matrix reunitarize(const Matrix& m) { return project_unitary(m); }

/// 4x4 dilation unitary defining the random channel of the extreme- and
/// dephasing-superchannel experiments.
inline Matrix random_channel_unitary() {
    return from_rows(4, 4, {
        {-0.0109, 0.1787}, {-0.2558, -0.1492}, {-0.2519, 0.2656}, {-0.4561, -0.7336},
        {-0.6709, -0.2262}, {0.1270, -0.1671}, {0.4623, -0.3549}, {-0.3017, -0.1551},
        {-0.1406, -0.5049}, {-0.2872, -0.5841}, {-0.4014, 0.1515}, {-0.0718, 0.3353},
        {0.3717, -0.2321}, {-0.6624, 0.0766}, {0.1922, -0.5526}, {0.0420, -0.1389},
    });
}

/// 8x8 pre-unitary of the random extreme superchannel.
inline Matrix extreme_v() {
    return from_rows(8, 8, {
        {0.1310, 0.0036}, {0.1140, -0.2525}, {-0.0068, 0.1055}, {-0.0556, -0.1594},
        {-0.1454, -0.1854}, {0.0073, -0.3811}, {0.2214, -0.0904}, {0.3471, -0.6985},
        {-0.1604, -0.2878}, {-0.1567, -0.0025}, {0.0613, -0.1076}, {-0.2527, 0.1187},
        {-0.0739, -0.7163}, {0.1182, -0.0921}, {0.2490, -0.3120}, {-0.0706, 0.2611},
        {0.0732, 0.3537}, {-0.4630, 0.0267}, {0.0920, 0.0445}, {0.2267, 0.2262},
        {0.1608, -0.0286}, {0.5365, 0.2132}, {-0.0708, -0.3283}, {-0.0228, -0.2614},
        {-0.0093, 0.1815}, {0.1717, 0.0019}, {0.6431, -0.1916}, {-0.2676, -0.0393},
        {0.2835, -0.0428}, {-0.2191, -0.0210}, {-0.4000, -0.2678}, {0.2271, 0.0038},
        {0.0826, -0.2314}, {-0.4620, -0.2645}, {0.5516, 0.0022}, {0.2165, -0.1446},
        {-0.3134, 0.0563}, {0.0363, -0.0046}, {0.0473, 0.3653}, {0.1578, 0.1447},
        {-0.1508, -0.4899}, {0.3662, -0.0245}, {0.1410, 0.0025}, {-0.2153, -0.0342},
        {-0.1672, 0.2146}, {0.5844, 0.2191}, {-0.1869, -0.0348}, {-0.0823, -0.1694},
        {0.2754, 0.0592}, {-0.3809, -0.1076}, {-0.3006, 0.1213}, {-0.6761, -0.1579},
        {-0.0537, 0.1575}, {0.1289, -0.1106}, {-0.2538, 0.0173}, {0.1640, 0.1696},
        {-0.2048, 0.5161}, {0.0955, 0.2651}, {0.2211, 0.1859}, {-0.3256, -0.1205},
        {-0.2508, -0.2259}, {0.1189, 0.1293}, {0.1400, 0.4275}, {-0.2195, -0.1139},
    });
}

/// 8x8 post-unitary of the random extreme superchannel.
inline Matrix extreme_w() {
    return from_rows(8, 8, {
        {0.4438, 0.3052}, {-0.1516, -0.1924}, {0.1702, -0.2479}, {0.1763, 0.1283},
        {0.0741, 0.1495}, {-0.0073, -0.2209}, {-0.5178, 0.0332}, {-0.4073, -0.0107},
        {0.2915, 0.1024}, {0.1375, -0.0168}, {-0.3881, -0.2651}, {0.0306, 0.0003},
        {-0.1106, 0.3559}, {0.2050, 0.3621}, {-0.1741, 0.0693}, {0.5075, -0.2425},
        {-0.0480, -0.2797}, {0.0909, -0.0858}, {0.1075, -0.1673}, {-0.3236, -0.0472},
        {0.1355, 0.3724}, {-0.3431, -0.5753}, {-0.1038, -0.1457}, {0.3381, -0.0721},
        {-0.3029, 0.1556}, {0.1901, 0.4494}, {-0.0179, -0.1726}, {0.0388, -0.2170},
        {0.0461, -0.3691}, {0.1803, -0.2864}, {-0.4075, 0.3044}, {0.1226, -0.2016},
        {0.1913, 0.3040}, {-0.1178, 0.5217}, {0.2078, -0.0749}, {-0.2228, -0.3476},
        {0.3159, 0.2880}, {-0.0994, 0.1536}, {0.3143, -0.0292}, {-0.1557, -0.1599},
        {0.3786, 0.0292}, {-0.1600, 0.0010}, {0.3856, 0.4572}, {-0.3605, 0.1393},
        {-0.0270, -0.2707}, {-0.0489, 0.1073}, {-0.1928, 0.2379}, {0.3690, -0.0730},
        {-0.0113, 0.0191}, {0.5498, 0.1459}, {0.2502, 0.3443}, {0.4872, 0.1597},
        {0.2423, 0.3037}, {-0.1340, 0.0581}, {-0.0583, 0.1419}, {0.0926, 0.1658},
        {-0.0737, 0.3725}, {-0.1613, -0.0762}, {-0.0488, -0.1704}, {-0.0245, 0.4611},
        {0.3602, -0.0189}, {0.2744, -0.2661}, {0.3682, 0.2291}, {0.2555, 0.2231},
    });
}

/// 4x4 controlled-target blocks of the dephasing superchannel.
inline Matrix dephasing_v1() {
    return from_rows(4, 4, {
        {0.2987, 0.2302}, {0.4874, -0.2877}, {0.1190, 0.2665}, {-0.6694, 0.0645},
        {0.0898, 0.2401}, {-0.5247, -0.5788}, {-0.3600, 0.2082}, {-0.0291, -0.3876},
        {0.7734, -0.1597}, {0.1368, 0.1863}, {-0.5275, -0.1207}, {0.1707, 0.0293},
        {-0.4084, 0.0403}, {-0.0644, 0.1087}, {-0.6699, 0.0164}, {-0.3253, 0.5107},
    });
}

inline Matrix dephasing_v2() {
    return from_rows(4, 4, {
        {-0.5089, 0.0961}, {-0.3067, 0.4412}, {0.0754, 0.5513}, {-0.2788, -0.2359},
        {-0.1870, -0.2108}, {0.2685, 0.6255}, {-0.5304, -0.2773}, {0.0053, 0.3145},
        {0.5061, 0.0705}, {-0.0278, -0.1007}, {-0.4042, 0.3316}, {-0.6458, 0.1939},
        {0.5896, -0.2091}, {0.1698, 0.4562}, {0.0943, 0.2234}, {0.2692, -0.4904},
    });
}

inline Matrix dephasing_w1() {
    return from_rows(4, 4, {
        {-0.2919, 0.0605}, {-0.6294, -0.6274}, {0.1046, -0.0290}, {0.3088, 0.1191},
        {0.2956, -0.0233}, {-0.0973, -0.4107}, {-0.3067, -0.1554}, {-0.3989, -0.6758},
        {-0.3639, 0.7948}, {0.1587, -0.0780}, {-0.2993, 0.2414}, {-0.2318, 0.0552},
        {-0.0806, -0.2295}, {0.0100, 0.0259}, {-0.1371, 0.8387}, {0.3037, -0.3545},
    });
}

inline Matrix dephasing_w2() {
    return from_rows(4, 4, {
        {-0.6174, 0.3184}, {0.4179, -0.3318}, {0.2918, 0.0792}, {0.3384, 0.1635},
        {-0.5162, -0.4553}, {-0.5212, -0.1814}, {0.2151, -0.1841}, {-0.0083, -0.3761},
        {-0.1403, 0.0197}, {-0.4111, -0.4270}, {-0.5477, 0.1773}, {-0.0179, 0.5448},
        {0.1005, 0.1163}, {-0.1773, -0.1668}, {0.6157, 0.3434}, {-0.6002, 0.2446},
    });
}

/// 2x2 input unitary channel of the decomposition demo.
inline Matrix decomp_u() {
    return from_rows(2, 2, {
        {0.6196, 0.2891}, {0.5199, -0.5120},
        {-0.7191, 0.1236}, {0.1266, -0.6720},
    });
}

/// 8x8 pre-unitary of the general (4-qubit) superchannel.
inline Matrix decomp_v() {
    return from_rows(8, 8, {
        {-0.3048, 0.1792}, {-0.1955, 0.1514}, {-0.1071, 0.4419}, {-0.2905, 0.4894},
        {0.0582, -0.0069}, {0.3937, 0.0449}, {0.1629, -0.0733}, {0.2968, 0.0526},
        {-0.2444, 0.2554}, {0.3402, -0.3981}, {-0.38, -0.0044}, {-0.0067, 0.1559},
        {-0.3934, -0.1094}, {-0.2565, -0.1723}, {-0.2516, 0.1297}, {0.2637, -0.1417},
        {-0.0471, -0.3504}, {0.1682, -0.1016}, {-0.4623, -0.0185}, {0.3695, 0.2124},
        {0.4099, 0.1691}, {0.1721, 0.1661}, {-0.086, -0.2099}, {-0.0726, -0.3607},
        {-0.3144, 0.1616}, {-0.2029, 0.0234}, {-0.2241, -0.1805}, {0.2492, -0.0861},
        {-0.3302, 0.2253}, {-0.0083, -0.1936}, {0.3955, -0.4893}, {-0.2484, 0.1617},
        {0.1437, 0.323}, {0.1932, 0.2012}, {-0.1963, 0.0867}, {-0.2034, 0.0288},
        {0.1726, -0.4514}, {-0.3652, 0.2439}, {0.3478, -0.1881}, {-0.2604, -0.2417},
        {0.3028, 0.1824}, {0.0162, 0.1912}, {-0.36, -0.0257}, {0.4639, -0.1851},
        {-0.053, -0.21}, {0.2402, 0.1343}, {0.2099, 0.2835}, {0.3502, 0.2979},
        {-0.3514, 0.0389}, {-0.0504, -0.2043}, {0.375, -0.0656}, {0.225, -0.191},
        {0.0744, -0.1392}, {-0.1365, 0.5133}, {0.0526, -0.2765}, {0.4555, -0.07},
        {-0.0019, 0.3535}, {0.5216, -0.3915}, {0.1607, -0.0696}, {-0.112, -0.0962},
        {0.3056, 0.2732}, {0.3194, -0.0075}, {0.279, 0.0544}, {-0.1099, 0.1849},
    });
}

/// 16x16 post-unitary of the general (4-qubit) superchannel.
inline Matrix decomp_w() {
    return from_rows(16, 16, {
        {0.2496, 0.0149}, {0.2583, 0.094}, {-0.142, -0.1203}, {0.0349, -0.3243},
        {-0.0593, -0.2491}, {0.1259, -0.1864}, {0.2037, -0.0822}, {-0.0785, 0.048},
        {-0.0784, -0.2447}, {-0.1059, -0.187}, {0.2683, 0.1565}, {0.027, -0.3735},
        {0.0801, -0.182}, {0.0589, 0.1512}, {0.1614, -0.0585}, {-0.1959, 0.2558},
        {-0.2373, 0.0788}, {-0.3037, 0.126}, {-0.0402, 0.1706}, {-0.0718, 0.23},
        {-0.1582, 0.1418}, {0.1646, -0.1858}, {0.1247, -0.1802}, {-0.2847, 0.1219},
        {0.1948, 0.2293}, {0.048, -0.3343}, {0.0701, -0.1766}, {-0.0728, -0.1856},
        {-0.0705, -0.2182}, {-0.2751, 0.0986}, {0.2089, 0.1523}, {0.0045, 0.0682},
        {-0.2248, 0.1095}, {0.1179, -0.1226}, {0.1822, 0.0558}, {-0.0741, 0.2566},
        {-0.1138, -0.1522}, {-0.0315, -0.2075}, {0.2547, -0.1522}, {0.0425, -0.2004},
        {0.0825, -0.1661}, {-0.2516, 0.2799}, {-0.1183, 0.2518}, {-0.2201, 0.0661},
        {0.1242, -0.2592}, {-0.22, 0.0525}, {-0.2873, -0.0038}, {-0.2517, -0.0691},
        {-0.1901, 0.1623}, {0.3132, 0.0882}, {0.0661, -0.1666}, {-0.284, 0.0335},
        {0.0413, 0.2787}, {-0.1569, 0.0769}, {-0.1572, 0.1256}, {-0.0615, 0.1315},
        {-0.157, -0.0736}, {0.022, 0.1112}, {-0.235, -0.3061}, {0.1081, -0.2763},
        {0.1078, 0.0399}, {-0.1089, -0.0951}, {-0.0276, 0.2065}, {-0.333, 0.2794},
        {-0.0658, -0.2412}, {-0.0596, 0.248}, {0.0867, -0.3673}, {-0.237, 0.2021},
        {-0.0141, 0.0435}, {-0.0651, 0.3}, {0.0707, -0.0175}, {0.4078, -0.1094},
        {-0.0824, -0.1228}, {-0.0549, -0.1076}, {0.2991, 0.014}, {-0.0186, 0.1768},
        {-0.0352, -0.052}, {-0.3052, 0.1329}, {0.266, -0.0877}, {-0.0168, 0.0436},
        {0.1712, -0.1822}, {0.1187, 0.1043}, {0.3132, 0.1139}, {-0.1399, 0.1597},
        {0.2434, 0.0886}, {0.3244, -0.0918}, {0.0191, 0.1291}, {-0.1523, -0.1812},
        {0.1974, 0.17}, {-0.148, 0.161}, {0.1659, 0.0188}, {-0.0182, 0.2201},
        {-0.105, -0.0469}, {0.2984, -0.1923}, {0.1901, 0.1128}, {-0.1552, 0.3129},
        {-0.2493, -0.0189}, {0.2004, 0.2046}, {-0.0233, 0.191}, {0.2898, -0.1628},
        {-0.1203, -0.0997}, {0.1576, 0.2563}, {-0.1431, 0.1529}, {0.0233, -0.1447},
        {0.1318, -0.3185}, {0.1564, 0.0239}, {0.0877, -0.1062}, {-0.4498, -0.0141},
        {-0.0473, -0.0824}, {-0.0954, -0.1962}, {0.0109, 0.2583}, {0.1798, 0.0812},
        {-0.2374, -0.0784}, {0.1884, 0.0826}, {0.1236, 0.1263}, {0.2088, 0.0682},
        {0.0835, -0.1652}, {-0.1811, -0.1144}, {0.2168, -0.2539}, {0.2162, 0.1115},
        {-0.2362, 0.2337}, {0.2573, -0.0928}, {0.0188, -0.1261}, {-0.1145, 0.1495},
        {0.3622, 0.0737}, {0.3076, 0.0484}, {0.2261, 0.1468}, {-0.1411, -0.0428},
        {-0.1046, -0.2271}, {0.0901, -0.1779}, {-0.2164, -0.0362}, {0.0399, -0.2029},
        {0.1211, -0.0554}, {-0.3369, -0.084}, {-0.0279, 0.3642}, {-0.116, 0.0211},
        {0.323, 0.1483}, {-0.1323, -0.1395}, {0.0935, -0.0912}, {-0.029, 0.3175},
        {0.1167, -0.0644}, {-0.1258, 0.3647}, {-0.1169, 0.1682}, {-0.0955, 0.1469},
        {-0.1484, -0.2012}, {0.1407, -0.0525}, {-0.2549, -0.0569}, {0.2266, -0.0998},
        {-0.1081, 0.474}, {0.0232, 0.0294}, {0.2458, -0.2511}, {0.0353, 0.0316},
        {0.0226, 0.0146}, {-0.2957, -0.083}, {-0.0928, 0.3398}, {0.0924, 0.0761},
        {-0.0457, 0.2595}, {-0.0453, -0.2416}, {0.0365, 0.2071}, {0.0346, 0.1146},
        {-0.2351, 0.0851}, {0.1065, -0.1222}, {-0.0901, 0.2486}, {-0.0477, 0.2347},
        {0.2255, -0.0802}, {-0.0224, -0.174}, {-0.1716, 0.1242}, {0.237, 0.0908},
        {-0.1721, -0.1751}, {0.0594, -0.4234}, {0.1996, 0.1861}, {0.205, 0.0541},
        {-0.3586, -0.0757}, {0.0632, -0.169}, {-0.2057, 0.036}, {-0.1029, 0.0554},
        {-0.2241, -0.1109}, {-0.266, -0.1549}, {-0.0406, 0.1548}, {0.2583, -0.0425},
        {-0.179, 0.1142}, {-0.0059, -0.0271}, {-0.0212, 0.3362}, {0.0442, 0.0525},
        {-0.1026, -0.0207}, {0.0667, 0.1958}, {-0.0253, 0.092}, {-0.0918, -0.067},
        {-0.0848, 0.0525}, {-0.0045, -0.0126}, {0.3188, -0.4419}, {-0.4276, 0.1375},
        {0.0403, -0.2467}, {0.1307, 0.0725}, {0.1723, 0.2049}, {0.2006, -0.0199},
        {0.1575, -0.1724}, {0.038, 0.4326}, {0.0355, -0.1262}, {-0.2927, 0.3575},
        {-0.2824, 0.1499}, {-0.1682, 0.024}, {-0.059, -0.0036}, {0.1132, 0.0792},
        {-0.1176, -0.2134}, {-0.2738, 0.0064}, {-0.1411, -0.127}, {-0.0674, 0.0204},
        {-0.0077, -0.2499}, {-0.2569, 0.1936}, {-0.0661, 0.122}, {-0.0947, -0.1935},
        {0.1183, -0.2758}, {-0.0135, -0.1952}, {-0.1709, -0.2207}, {0.0604, -0.3126},
        {-0.1578, -0.0919}, {0.0187, -0.0196}, {-0.5032, 0.017}, {0.0682, 0.0755},
        {-0.1524, 0.0931}, {-0.1336, 0.0936}, {0.0804, 0.1285}, {-0.0352, 0.2828},
        {0.2175, 0.1234}, {-0.053, 0.1559}, {-0.23, 0.2018}, {0.0436, 0.1896},
        {-0.3336, -0.0763}, {0.1976, -0.1153}, {-0.1811, 0.0747}, {0.1895, 0.2625},
        {-0.0483, -0.0613}, {-0.1126, 0.1125}, {0.0355, -0.063}, {0.2123, 0.3211},
        {0.4206, -0.0092}, {-0.1389, -0.0905}, {-0.0502, 0.016}, {0.0641, 0.2646},
        {0.2498, -0.0112}, {0.3396, -0.1248}, {-0.0057, 0.3846}, {-0.1327, 0.0958},
        {-0.164, -0.0312}, {-0.0961, 0.1644}, {0.0943, -0.1998}, {0.0498, -0.1012},
        {0.3464, -0.0108}, {0.3327, -0.0229}, {0.0219, -0.0296}, {0.0952, -0.0145},
        {-0.1348, 0.3624}, {-0.2264, 0.1113}, {0.0436, -0.1429}, {-0.1608, 0.0548},
    });
}

/// 4x4 pre-unitary of the first extreme component of the decomposition demo.
inline Matrix decomp_v1() {
    return from_rows(4, 4, {
        {-0.4371, -0.2427}, {-0.2991, 0.0099}, {-0.543, -0.2371}, {-0.5449, 0.1117},
        {-0.4979, 0.0455}, {-0.0157, 0.2448}, {0.4424, -0.5705}, {0.2641, 0.3145},
        {-0.3409, -0.3658}, {-0.2866, -0.3124}, {-0.213, 0.2186}, {0.6782, -0.1312},
        {-0.4157, -0.2778}, {0.8157, 0.0725}, {-0.024, 0.1845}, {-0.0852, -0.1938},
    });
}

/// 8x8 post-unitary of the first extreme component.
inline Matrix decomp_w1() {
    return from_rows(8, 8, {
        {0.1311, 0.3283}, {0.1787, 0.1497}, {0.2948, -0.0795}, {-0.1267, 0.144},
        {-0.2625, 0.1616}, {0.435, 0.4329}, {0.348, 0.2178}, {-0.118, 0.1909},
        {-0.3088, -0.1721}, {-0.0507, -0.2383}, {0.4115, -0.0159}, {0.3146, -0.33},
        {-0.3464, 0.4922}, {0.0009, 0.0816}, {-0.1953, -0.1556}, {0.0655, 0.0522},
        {0.2655, -0.2335}, {-0.4459, -0.1607}, {-0.0586, 0.491}, {0.0964, 0.1417},
        {0.2059, 0.2077}, {0.3649, 0.1429}, {-0.1906, 0.315}, {0.0052, -0.0422},
        {0.3518, 0.0347}, {0.2181, -0.0184}, {0.2035, 0.2981}, {-0.2619, -0.1756},
        {0.0745, 0.2214}, {-0.3757, -0.2796}, {-0.0407, 0.1763}, {-0.0282, 0.5385},
        {0.1854, -0.3011}, {0.1739, 0.4225}, {0.0297, 0.1532}, {-0.1691, -0.2287},
        {0.258, 0.129}, {0.0451, 0.3754}, {-0.073, -0.529}, {-0.1907, -0.1153},
        {-0.1763, -0.3065}, {-0.2514, -0.0616}, {-0.2356, 0.0748}, {-0.6395, -0.2149},
        {-0.4043, -0.0311}, {0.1943, -0.1172}, {0.2272, -0.0731}, {0.1031, 0.091},
        {0.2343, 0.2647}, {-0.5026, -0.1922}, {0.4268, -0.0851}, {-0.1434, 0.0711},
        {-0.0345, -0.3266}, {0.0132, -0.041}, {-0.1625, -0.4256}, {-0.2028, 0.1095},
        {0.2445, 0.2554}, {0.1842, 0.1208}, {0.2086, 0.2099}, {-0.1123, -0.2286},
        {-0.1692, -0.1362}, {0.1655, -0.1419}, {-0.2248, 0.0226}, {0.5754, -0.444},
    });
}

/// 4x4 pre-unitary of the second extreme component.
inline Matrix decomp_v2() {
    return from_rows(4, 4, {
        {-0.4008, 0.299}, {-0.2726, -0.0633}, {-0.5762, 0.0519}, {-0.3259, -0.4804},
        {0.3645, 0.3422}, {-0.2194, 0.2229}, {0.476, -0.3105}, {-0.0414, -0.5723},
        {0.0648, -0.4958}, {0.3064, 0.0338}, {0.1171, 0.564}, {-0.0865, -0.5618},
        {-0.4988, -0.034}, {0.1224, 0.8449}, {0.0872, -0.0542}, {0.0955, 0.039},
    });
}

/// 8x8 post-unitary of the second extreme component.
inline Matrix decomp_w2() {
    return from_rows(8, 8, {
        {-0.2271, 0.271}, {-0.1472, 0.254}, {0.321, 0.1788}, {0.1722, -0.0949},
        {-0.162, -0.4895}, {-0.1554, 0.4099}, {0.1569, -0.0484}, {-0.3607, -0.0085},
        {-0.3475, 0.0651}, {0.3698, 0.069}, {0.1526, -0.0904}, {-0.2671, 0.0309},
        {-0.209, -0.117}, {0.1731, -0.4028}, {0.1465, -0.143}, {-0.0624, -0.5782},
        {-0.1736, -0.308}, {-0.1436, 0.287}, {0.2615, -0.184}, {-0.2339, 0.5177},
        {-0.0259, 0.0096}, {0.1182, -0.0133}, {-0.3389, 0.3749}, {-0.2362, 0.1446},
        {0.3238, 0.1419}, {0.142, 0.3402}, {-0.2921, -0.2162}, {-0.0305, -0.208},
        {0.2057, -0.5327}, {-0.0957, -0.319}, {-0.3229, 0.1092}, {-0.0894, 0.0403},
        {0.3455, 0.0751}, {-0.0961, 0.4293}, {-0.107, 0.2211}, {-0.1628, 0.5174},
        {0.0118, 0.015}, {-0.0694, -0.1127}, {0.3936, -0.3791}, {0.0777, 0.0661},
        {0.2639, -0.2353}, {-0.3539, 0.0755}, {0.2208, -0.5372}, {0.1758, -0.1027},
        {-0.2688, 0.035}, {-0.38, -0.0746}, {0.1909, 0.0368}, {0.1329, -0.2938},
        {-0.3046, -0.1795}, {-0.1508, 0.2398}, {0.1115, 0.2248}, {0.0133, -0.3706},
        {-0.1492, 0.1805}, {-0.2096, -0.5272}, {-0.0013, -0.159}, {-0.0742, 0.4322},
        {-0.1061, 0.3373}, {-0.2949, 0.2044}, {-0.2965, 0.2251}, {0.1974, 0.0994},
        {-0.4443, 0.1544}, {0.0274, -0.0227}, {-0.4356, 0.0898}, {0.2576, -0.2688},
    });
}

}  // namespace superkit::refdata
