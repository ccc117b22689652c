"""Moment constants for the asymptotic trace-test distribution.

Generated by tools/gen_trace_moments.py (simulation of the limiting
Brownian functional; 20000 replications, step length 1/500,
seed 20240601) and embedded by tools/embed_trace_moments.py.
Do not edit by hand; regenerate instead.

Each entry maps (deterministic case, number of common trends d) to the
empirical mean and variance of the asymptotic trace statistic, plus
reference quantiles kept for validation.
"""

TRACE_MOMENTS = {
    'none': {
        1: {'mean': 1.1529151317775985, 'variance': 2.2226051483811426, 'q90': 2.995076738337884, 'q95': 4.105995188334194, 'q99': 6.955468253560682},
        2: {'mean': 6.09038916589312, 'variance': 10.746791260400004, 'q90': 10.49290527608771, 'q95': 12.361198591525268, 'q99': 16.235558505669456},
        3: {'mean': 14.959821210553523, 'variance': 24.95716821306353, 'q90': 21.629061514424357, 'q95': 24.005993839459002, 'q99': 29.301202334170874},
        4: {'mean': 27.83015282993756, 'variance': 45.40414674830261, 'q90': 36.798100164312785, 'q95': 39.8633596954171, 'q99': 46.33636984989919},
        5: {'mean': 44.49271924747395, 'variance': 72.23985598351912, 'q90': 55.71071804785653, 'q95': 59.49501542958513, 'q99': 66.94376508485011},
        6: {'mean': 65.02769341118429, 'variance': 103.27723003239818, 'q90': 78.31937171188706, 'q95': 82.6173798968175, 'q99': 91.43858606599534},
        7: {'mean': 89.7818409282501, 'variance': 141.5970961051926, 'q90': 105.37995807929974, 'q95': 110.29794503698864, 'q99': 120.47603522693895},
        8: {'mean': 118.14177890139494, 'variance': 184.82462399949065, 'q90': 136.0408506320482, 'q95': 141.5255618043147, 'q99': 152.37892704494635},
        9: {'mean': 150.32535244952882, 'variance': 232.95944433899172, 'q90': 170.18446787050857, 'q95': 176.31940377826643, 'q99': 188.5779239774546},
        10: {'mean': 185.82058510721293, 'variance': 285.0434049628952, 'q90': 207.77421154524558, 'q95': 214.57782504273817, 'q99': 228.2983323995982},
        11: {'mean': 225.7079159584603, 'variance': 350.24661750053383, 'q90': 250.13055195807286, 'q95': 257.6384170206504, 'q99': 272.17097152212585},
        12: {'mean': 269.3133810862701, 'variance': 408.71437000757453, 'q90': 295.6620397507108, 'q95': 304.1676311205988, 'q99': 318.251388988697},
    },
    'restricted_constant': {
        1: {'mean': 4.025921490603601, 'variance': 6.731906305195654, 'q90': 7.4679902344274645, 'q95': 8.981882857199134, 'q99': 12.50534808576508},
        2: {'mean': 11.979047393802503, 'variance': 19.6055706398385, 'q90': 17.936994403982233, 'q95': 20.13767024443828, 'q99': 25.048943441539265},
        3: {'mean': 23.889514340602975, 'variance': 37.74597548933202, 'q90': 32.019220906341346, 'q95': 34.840630314089296, 'q99': 41.05991396378786},
        4: {'mean': 39.61993543539584, 'variance': 62.09669671383016, 'q90': 49.97625555121269, 'q95': 53.67856414663573, 'q99': 60.69038973184894},
        5: {'mean': 59.391534051633975, 'variance': 92.87147745614045, 'q90': 72.16994855428743, 'q95': 76.21658561153136, 'q99': 84.42868383296961},
        6: {'mean': 82.83218549587657, 'variance': 129.0645368338312, 'q90': 97.82611043737245, 'q95': 102.47123022613097, 'q99': 111.93089414287925},
        7: {'mean': 110.22427379944627, 'variance': 170.58113753256893, 'q90': 127.3912130927936, 'q95': 132.65048627773504, 'q99': 142.99545319963948},
        8: {'mean': 141.3264330588824, 'variance': 215.23244136826963, 'q90': 160.71190276526232, 'q95': 166.5087010575374, 'q99': 178.25770703493828},
        9: {'mean': 176.25719477250024, 'variance': 264.73699102917533, 'q90': 197.198141438149, 'q95': 203.63625406318417, 'q99': 216.91104744006955},
        10: {'mean': 215.03791266899304, 'variance': 326.75464726383564, 'q90': 238.51898984203274, 'q95': 245.58910799503394, 'q99': 259.7311096073693},
        11: {'mean': 257.70608240262146, 'variance': 391.01321334281994, 'q90': 283.3426646098541, 'q95': 291.0794916398114, 'q99': 305.01278853178735},
        12: {'mean': 303.5819768845018, 'variance': 460.1713390890289, 'q90': 331.66698160972055, 'q95': 339.89222333614583, 'q99': 355.2704306740938},
    },
    'unrestricted_constant': {
        1: {'mean': 0.9938438391896103, 'variance': 1.9464059246987542, 'q90': 2.679640684435323, 'q95': 3.802751803206763, 'q99': 6.56622549212769},
        2: {'mean': 8.277247806802743, 'variance': 14.298642471117205, 'q90': 13.328618984218616, 'q95': 15.472801429009536, 'q99': 19.767637739507744},
        3: {'mean': 19.374743945856544, 'variance': 31.89856989964149, 'q90': 26.957098655706787, 'q95': 29.574057342912674, 'q99': 34.97591792518426},
        4: {'mean': 34.11064150507321, 'variance': 53.998021086739776, 'q90': 43.78765807345829, 'q95': 47.27581004607331, 'q99': 54.22618659533732},
        5: {'mean': 52.978483491542704, 'variance': 82.96512844803932, 'q90': 64.8712139632003, 'q95': 68.76813088472602, 'q99': 77.04361671495988},
        6: {'mean': 75.59682382301837, 'variance': 116.8480766718669, 'q90': 89.84373762279145, 'q95': 94.30348625509762, 'q99': 103.33007902816122},
        7: {'mean': 101.89165290675295, 'variance': 152.0994373852328, 'q90': 118.08373187792381, 'q95': 123.27050762841421, 'q99': 133.02741391344304},
        8: {'mean': 132.4008337259038, 'variance': 194.43191176330134, 'q90': 150.67483260542116, 'q95': 156.09812232638473, 'q99': 167.26553948074755},
        9: {'mean': 166.09624402086018, 'variance': 253.73380928984045, 'q90': 187.03279956524355, 'q95': 193.442020447217, 'q99': 205.22058515218916},
        10: {'mean': 204.05564398827883, 'variance': 308.320329330115, 'q90': 226.9305401966076, 'q95': 234.0417044181185, 'q99': 247.51321995301234},
        11: {'mean': 245.60849257445736, 'variance': 369.4870062847293, 'q90': 270.3834044666884, 'q95': 278.0957373722203, 'q99': 293.16225945267905},
        12: {'mean': 290.8093894709176, 'variance': 438.8428922056475, 'q90': 317.7628401653254, 'q95': 326.2525842145364, 'q99': 341.85079771301594},
    },
}
