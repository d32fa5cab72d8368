#pragma once

// Published gamma-approximation coefficient rows used as golden test
// vectors: n, mu, sigma, alpha, beta. The circle n=1 row is the trivial
// case (mu = sigma = 0, no alpha/beta) and is checked separately.

struct CoefficientRow {
    int n;
    double mu, sigma, alpha, beta;
};

inline constexpr CoefficientRow kCircleRows[] = {
    {2, -0.30685281944, 0.42134661097, 0.5303727787, 1.7284272626},
    {3, -0.40138771133, 0.39163412615, 1.0504299307, 2.6169957401},
    {4, -0.44703897221, 0.35694615977, 1.5685029651, 3.5086492736},
    {5, -0.47389542090, 0.32812171161, 2.0859077028, 4.4016202960},
    {6, -0.49157386411, 0.30468462723, 2.6030138779, 5.2952650007},
    {7, -0.50408985094, 0.28538641001, 3.1199621882, 6.1892977659},
    {8, -0.51341560118, 0.26922062265, 3.6368172156, 7.0835736336},
    {9, -0.52063256552, 0.25545730989, 4.1536126209, 7.9780115497},
    {10, -0.52638316097, 0.24357149054, 4.6703676327, 8.8725627622},
    {11, -0.53107298117, 0.23318045574, 5.1870940218, 9.7671962343},
    {12, -0.53497069509, 0.22399992418, 5.7037993931, 10.661891288},
    {13, -0.53826132075, 0.21581464577, 6.2204888775, 11.556633623},
    {14, -0.54107642552, 0.20845868134, 6.7371660617, 12.451413043},
    {15, -0.54351212546, 0.20180199027, 7.2538335284, 13.346222078},
    {16, -0.54564027099, 0.19574114482, 7.7704931842, 14.241055137},
    {17, -0.54751564917, 0.19019278130, 8.2871464679, 15.135907952},
    {18, -0.54918076474, 0.18508889795, 8.8037944850, 16.030777205},
    {19, -0.55066909903, 0.18037342145, 9.3204380992, 16.925660284},
    {20, -0.55200738359, 0.17599966025, 9.8370779953, 17.820555101},
    {21, -0.55321721942, 0.17192838836, 10.353714723, 18.715459966},
    {22, -0.55431625140, 0.16812638422, 10.870348728, 19.610373502},
    {23, -0.55531903429, 0.16456530295, 11.386980378, 20.505294568},
    {24, -0.55623768074, 0.16122079606, 11.903609974, 21.400222219},
    {25, -0.55708235289, 0.15807181728, 12.420237772, 22.295155658},
    {26, -0.55786163973, 0.15510006970, 12.936863984, 23.190094215},
    {27, -0.55858285021, 0.15228956183, 13.453488791, 24.085037315},
    {28, -0.55925224308, 0.14962624783, 13.970112348, 24.979984471},
    {29, -0.55987520898, 0.14709773409, 14.486734786, 25.874935260},
    {30, -0.56045641592, 0.14469303786, 15.003356221, 26.769889316},
    {31, -0.56099992644, 0.14240238764, 15.519976752, 27.664846322},
    {32, -0.56150929264, 0.14021705698, 16.036596465, 28.559806000},
    {33, -0.56198763397, 0.13812922520, 16.553215436, 29.454768105},
    {34, -0.56243770112, 0.13613186018, 17.069833733, 30.349732422},
    {35, -0.56286192896, 0.13421861914, 17.586451414, 31.244698760},
    {36, -0.56326248056, 0.13238376421, 18.103068531, 32.139666950},
    {37, -0.56364128415, 0.13062209032, 18.619685131, 33.034636842},
    {38, -0.56400006410, 0.12892886329, 19.136301256, 33.929608300},
    {39, -0.56434036717, 0.12729976649, 19.652916943, 34.824581204},
    {40, -0.56466358482, 0.12573085473, 20.169532225, 35.719555443},
    {50, -0.56718233290, 0.11268251022, 25.335668201, 44.669353630},
    {100, -0.57220733165, 0.07999483737, 51.166170842, 89.418936130},
    {200, -0.57471358157, 0.05667582819, 102.82700128, 178.91869024},
    {1000, -0.57671558157, 0.02538570267, 516.11323043, 894.91813110},
};

inline constexpr CoefficientRow kLineRows[] = {
    {1, -0.30685281944, 0.42134661097, 0.5303727787, 1.7284272626},
    {2, -0.46027922916, 0.47107983211, 0.9546710017, 2.0741127151},
    {3, -0.50367198448, 0.41605669559, 1.4655159820, 2.9096634857},
    {4, -0.52375217707, 0.37216444132, 1.9805323051, 3.7814302103},
    {5, -0.53526598479, 0.33877009357, 2.4964861617, 4.6640104783},
    {6, -0.54271600068, 0.31267266168, 3.0127662005, 5.5512757995},
    {7, -0.54792596801, 0.29166509010, 3.5291885826, 6.4409952963},
    {8, -0.55177220361, 0.27432407161, 4.0456825350, 7.3321608239},
    {9, -0.55472732324, 0.25971176754, 4.5622161702, 8.2242499676},
    {10, -0.55706844292, 0.24718899787, 5.0787734475, 9.1169649117},
    {11, -0.55896869203, 0.23630560624, 5.5953456092, 10.010123445},
    {12, -0.56054176338, 0.22673516237, 6.1119275604, 10.903607830},
    {13, -0.56186538378, 0.21823485573, 6.6285161824, 11.797338604},
    {14, -0.56299448405, 0.21062004241, 7.1451094857, 12.691260196},
    {15, -0.56396898009, 0.20374758571, 7.6617061562, 13.585332574},
    {16, -0.56481857220, 0.19750464279, 8.1783052999, 14.479526174},
    {17, -0.56556581502, 0.19180092539, 8.6949062935, 15.373818683},
    {18, -0.56622814360, 0.18656323700, 9.2115086925, 16.268192948},
    {19, -0.56681924742, 0.18173153891, 9.7281121740, 17.162635564},
    {20, -0.56735002456, 0.17725606569, 10.244716499, 18.057135905},
    {21, -0.56782925844, 0.17309517558, 10.761321490, 18.951685440},
    {22, -0.56826410683, 0.16921372498, 11.277927009, 19.846277238},
    {23, -0.56866046122, 0.16558182269, 11.794532952, 20.740905613},
    {24, -0.56902321488, 0.16217386361, 12.311139238, 21.635565854},
    {25, -0.56935646566, 0.15896777083, 12.827745803, 22.530254026},
    {26, -0.56966367125, 0.15594439507, 13.344352596, 23.424966817},
    {27, -0.56994776945, 0.15308703435, 13.860959576, 24.319701417},
    {28, -0.57021127234, 0.15038104652, 14.377566712, 25.214455430},
    {29, -0.57045634068, 0.14781353401, 14.894173977, 26.109226797},
    {30, -0.57068484324, 0.14537308573, 15.410781349, 27.004013741},
    {31, -0.57089840448, 0.14304956395, 15.927388810, 27.898814720},
    {32, -0.57109844324, 0.14083392740, 16.443996347, 28.793628387},
    {33, -0.57128620426, 0.13871808353, 16.960603947, 29.688453564},
    {34, -0.57146278405, 0.13669476430, 17.477211599, 30.583289214},
    {35, -0.57162915237, 0.13475742130, 17.993819297, 31.478134420},
    {36, -0.57178616999, 0.13290013672, 18.510427032, 32.372988371},
    {37, -0.57193460359, 0.13111754743, 19.027034798, 33.267850343},
    {38, -0.57207513829, 0.12940477988, 19.543642592, 34.162719691},
    {39, -0.57220838818, 0.12775739416, 20.060250408, 35.057595838},
    {40, -0.57233490531, 0.12617133563, 20.576858242, 35.952478263},
    {50, -0.57331938929, 0.11299717384, 25.742937131, 44.901563792},
    {100, -0.57527585985, 0.08010572577, 51.573330873, 89.649739321},
    {200, -0.57624784567, 0.05671497003, 103.23410946, 179.14879897},
    {1000, -0.57702243439, 0.02538919914, 516.52029838, 895.14768854},
};
