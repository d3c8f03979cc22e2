"""Frozen reference eigenvalues for the worked problems.

Each list was produced by an independent method and is pinned here so the
test suite checks the solver against fixed numbers rather than against a
rerun of the same code path.

BESSEL_WEIGHTED_LAMBDAS: problem (y u')' + y u + lam u / y = 0 on [1, 4],
u'(1) = u(4) = 0.  All 88 eigenvalues with lam <= 200^2 (one negative),
computed by oracle_eigenvalues (DOP853 lockstep integration at
rtol 1e-12 / atol 1e-14, scan step 0.02, imaginary-axis sweep to tau = 5).

MIXED_BC_LAMBDAS: problem u'' - 2u' + u = -lam (y^2+1) u on [0, 2],
u(0) - u'(0) = 0, u(2) + u'(2) = 0, i.e. p = e^(-2y), q = -e^(-2y),
r = (y^2+1) e^(-2y).  The 53 eigenvalues with omega <= 56, computed by
oracle_eigenvalues with the same settings.

COMPLEX_WEIGHT_OMEGAS: problem u'' = -lam e^(iy) u on [0, pi], u'(0) = 0,
u(pi) + u'(pi) = 0.  All 64 eigenvalues with |Re omega| <= 50 (principal
branch, Re omega >= 0).  The solution basis is closed-form in Bessel
functions: u = a J0(z) + b Y0(z) with z(y) = 2 i omega e^(iy/2); roots of
the boundary determinant were polished with mpmath Newton at 90 + 2|omega|
significant digits (final Newton steps < 4e-15).  Deep roots are beyond
float64 shooting accuracy, which is why these values are pinned from the
closed form rather than from oracle_eigenvalues.
"""

import numpy as np

BESSEL_WEIGHTED_LAMBDAS = np.array([
    -1.858233862313069, 6.7366905276882019, 26.948455742328676, 57.646096190075667,
    98.677051891497115, 150.00388747154591, 211.61352626862387, 283.50047867761913,
    365.66212966773827, 458.09711076636398, 560.80465164299244, 673.7842926340071,
    797.0357460628511, 930.55882460115038, 1074.3534021039438, 1228.4193911519062,
    1392.7567296381576, 1567.3653724701012, 1752.2452862756304, 1947.3964459334572,
    2152.8188322438464, 2368.5124303311095, 2594.4772285266945, 2830.7132175746274,
    3077.2203900572731, 3333.9987399743377, 3601.0482624301171, 3878.3689533983402,
    4165.9608095433796, 4463.8238280829019, 4771.9580066813396, 5090.36334336654,
    5419.039836463995, 5757.9874845445393, 6107.2062863824731, 6466.696240921774,
    6836.4573472486818, 7216.489604569324, 7606.7930121913141, 8007.3675695086004,
    8418.2132759888427, 8839.3301311629311, 9270.7181346161778, 9712.3772859809142,
    10164.307584930246, 10626.509031172736, 11098.981624447892, 11581.72536452231,
    12074.740251186357, 12578.026284251337, 13091.583463547016, 13615.411788919509,
    14149.511260229421, 14693.881877350255, 15248.52364016699, 15813.436548574868,
    16388.620602478302, 16974.075801789939, 17569.802146429822, 18175.799636324642,
    18792.068271407108, 19418.608051615342, 20055.418976892364, 20702.501047185655,
    21359.854262446723, 22027.478622630755, 22705.374127696272, 23393.54077760486,
    24091.978572320859, 24800.687511811167, 25519.667596045041, 26248.918824993823,
    26988.441198630859, 27738.234716931278, 28498.299379871856, 29268.635187430926,
    30049.242139588208, 30840.120236324736, 31641.269477622725, 32452.689863465541,
    33274.381393837539, 34106.344068724044, 34948.577888111278, 35801.082851986284,
    36663.858960336875, 37536.906213151538, 38420.224610419478, 39313.814152130493,
])

MIXED_BC_LAMBDAS = np.array([
    0.22072511661932803, 1.6712820495811711, 5.0910199655024773, 10.735404950195262,
    18.634799596446239, 28.789921385240479, 41.200493309347152, 55.86663952174883,
    72.788546417073562, 91.966351413759085, 113.40014142289989, 137.08996982466698,
    163.03586987658758, 191.2378629067986, 221.69596303199711, 254.41017987790357,
    289.38052018513667, 326.60698878611879, 366.08958921767652, 407.82832411620609,
    451.82319547917871, 498.07420484220887, 546.58135340144531, 597.34464209974794,
    650.36407168839446, 705.6396427719435, 763.17135584130654, 822.95921129844396,
    885.00320947501973, 949.30335064664985, 1015.8596350438909, 1084.672062860798,
    1155.7406342616434, 1229.0653493862364, 1304.6462083541676, 1382.4832112682177,
    1462.5763582171144, 1544.9256492777774, 1629.531084517153, 1716.3926639937274,
    1805.5103877587781, 1896.884255857414, 1990.5142683294448, 2086.4004252101108,
    2184.5427265306994, 2284.9411723190633, 2387.5957626000654, 2492.506497395957,
    2599.6733767266965, 2709.0964006102317, 2820.7755690627359, 2934.7108820988165,
    3050.9023397316928,
])

COMPLEX_WEIGHT_OMEGAS = np.array([
    0.39972595151843476-0.23976418557091403j, 0.79763630035273791-1.0209831316253741j,
    1.5564475122047763-1.7016312659940831j, 2.3406759658876028-2.4433670944915664j,
    3.128520879716592-3.206745154887332j, 3.915995999970062-3.9789895904095793j,
    4.7029852893672004-4.7556579122212188j, 5.4896025976584228-5.5348397509759621j,
    6.2759534781412798-6.3155856359598506j, 7.0621123928201728-7.0973708244391407j,
    7.8481301615909755-7.8798817790012992j, 8.6340417989350122-8.6629196140892049j,
    9.4198719236323836-9.4463520668788838j, 10.205638233875231-10.230087747457064j,
    10.991353727475474-11.01406147702401j, 11.777028139943575-11.798225516395526j,
    12.562668894477946-12.582544096879525j, 13.348281742822245-13.36698988838846j,
    14.133871206525832-14.151541648697661j, 14.919440886692893-14.93618261724888j,
    15.704993685344576-15.720899392116563j, 16.490531966248199-16.505681128633501j,
    17.276057673552977-17.290518957067441j, 18.061572420530165-18.075405552523584j,
    18.847077556807672-18.86033481257704j, 19.632574219916002-19.645301612410062j,
    20.418063375239395-20.43030161654843j, 21.203545847294155-21.215331132497624j,
    21.989022344446674-22.000386995786926j, 22.774493478617565-22.785466478828777j,
    23.559959781116337-23.570567218028696j, 24.345421715462813-24.355687155019169j,
    25.130879687842206-25.140824488924089j, 25.91633405568702-25.92597763731121j,
    26.701785134765224-26.711145204041902j, 27.48723320506889-27.496325952637385j,
    28.272678515733215-28.281518784087666j, 29.058121289166934-29.06672271826195j,
    29.843561724537526-29.851936878256481j, 30.629000000725675-30.637160477152143j,
    31.414436278840803-31.42239280675981j, 32.199870704371826-32.207633228013762j,
    32.985303409033286-32.992881162738378j, 33.770734512356029-33.778136086564274j,
    34.556164123062644-34.56339752281103j, 35.341592340260867-35.348665037185974j,
    36.127019254482455-36.133938233174781j, 36.91244494859032-36.919216748020808j,
    37.697869498572985-37.704500249207236j, 38.483292974242424-38.489788431370187j,
    39.268715439848599-39.275081013582415j, 40.054136954622123-40.06037773695671j,
    40.839557573254694-40.845678362525916j, 41.624977346325366-41.630982669363078j,
    42.410396320679745-42.416290452910509j, 43.19581453976798-43.201601523491227j,
    43.981232043946733-43.986915704979921j, 44.76664887074952-44.77223283361387j,
    45.552065055129162-45.55755275692691j, 46.337480629675738-46.342875332791841j,
    47.122895624812784-47.128200428558635j, 47.908310068974295-47.913527920277403j,
    48.693723988764667-48.698857691996636j, 49.479137409103444-49.484189635128224j,
])
