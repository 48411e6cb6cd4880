// (w, Ai(w), Ai'(w)) computed with mpmath at 40 significant digits.
pub const AIRY_TABLE: [(f64, f64, f64); 73] = [
    (-20.0, -0.1764061270779847, 0.8928628567364713),
    (-19.5, 0.26780027210258395, 0.08774108834375714),
    (-19.0, -0.14166127688042265, -1.0049611250051396),
    (-18.5, -0.11208853977554048, 1.0646439622797084),
    (-18.0, 0.2712045408044142, -0.15903891520496802),
    (-17.5, -0.17266059066222628, -0.9024049204808416),
    (-17.0, -0.10526230029095239, 1.05868457664466),
    (-16.5, 0.27886848056055086, -0.09462257996353214),
    (-16.0, -0.1430579316690997, -0.9747644416212727),
    (-15.5, -0.16644795409041976, 0.9049379354302122),
    (-15.0, 0.2782174908708289, 0.272374204308642),
    (-14.5, -0.030597418939551424, -1.0953212728805393),
    (-14.0, -0.2659834827840778, 0.44302487700284365),
    (-13.5, 0.1909812432962203, 0.8264327514252542),
    (-13.0, 0.17151043937053703, -0.8715196778799533),
    (-12.5, -0.27627456138116024, -0.41933133041950515),
    (-12.0, -0.06655517505437313, 1.0231104533679707),
    (-11.5, 0.30542297004359265, 0.08772415432178444),
    (-11.0, -0.008759589255702381, -1.0273278736645794),
    (-10.5, -0.3119260350510506, 0.09095748739068167),
    (-10.0, 0.04024123848644319, 0.99626504413279),
    (-9.5, 0.3191032477191282, -0.10809531881187123),
    (-9.0, -0.022133721547341403, -0.9756639809263316),
    (-8.5, -0.33029023763020887, -0.03231334828463914),
    (-8.0, -0.0527050503563862, 0.9355609381983065),
    (-7.5, 0.3217757163806479, 0.3188095066985546),
    (-7.0, 0.18428083525050565, -0.7710081684101265),
    (-6.5, -0.2380203019971158, -0.6749524925132022),
    (-6.0, -0.3291451736298231, 0.3459354872813429),
    (-5.5, 0.017781541276574976, 0.8641972177713984),
    (-5.0, 0.35076100902411433, 0.32719281855444315),
    (-4.5, 0.2921527810559595, -0.5233625323157477),
    (-4.0, -0.07026553294928951, -0.7906285753685813),
    (-3.5, -0.37553382314043193, -0.34344343345404815),
    (-3.0, -0.37881429367765806, 0.3145837692165988),
    (-2.5, -0.11232506769296609, 0.6788527342647943),
    (-2.0, 0.22740742820168558, 0.618259020741691),
    (-1.5, 0.4642565777488694, 0.3091869672024104),
    (-1.0, 0.5355608832923521, -0.01016056711664521),
    (-0.5, 0.4757280916105396, -0.20408167033954738),
    (0.0, 0.3550280538878172, -0.2588194037928068),
    (0.5, 0.23169360648083348, -0.2249105326646839),
    (1.0, 0.13529241631288141, -0.1591474412967932),
    (1.5, 0.07174949700810541, -0.09738201284230132),
    (2.0, 0.03492413042327438, -0.05309038443365363),
    (2.5, 0.01572592338047049, -0.026250881035903232),
    (3.0, 0.006591139357460719, -0.011912976705951319),
    (3.5, 0.002584098786989635, -0.005004413967952583),
    (4.0, 0.0009515638512048018, -0.001958640950204179),
    (4.5, 0.00033025032351430896, -0.0007178665675575089),
    (5.0, 0.00010834442813607442, -0.0002474138908684625),
    (5.5, 3.368531190859981e-05, -8.046339130556515e-05),
    (6.0, 9.947694360252889e-06, -2.4765200397034955e-05),
    (6.5, 2.7958823432049136e-06, -7.231931466601793e-06),
    (7.0, 7.492128863997167e-07, -2.008150894738792e-06),
    (7.5, 1.9172560675134309e-07, -5.312713959720545e-07),
    (8.0, 4.6922076160992316e-08, -1.3414392979067865e-07),
    (8.5, 1.0997009755195506e-08, -3.237725440447602e-08),
    (9.0, 2.47116843087249e-09, -7.480641389658946e-09),
    (9.5, 5.330263704617492e-10, -1.6566394593740667e-09),
    (10.0, 1.1047532552898686e-10, -3.5206336767389237e-10),
    (-18.3, 0.1145148033583687, 1.0606792615372522),
    (-12.7, -0.13270691889389788, -0.9569453910192752),
    (-7.3, 0.3357703705151473, -0.18009580448329365),
    (-6.9, 0.10168799773976482, -0.8710310586863874),
    (-4.6, 0.33749597548946275, -0.3795339143358459),
    (-4.4, 0.23370325807316336, -0.6408501832875633),
    (4.4, 0.00040997358638696183, -0.0008818920864917674),
    (4.6, 0.00026543212392445047, -0.0005829141778103336),
    (6.9, 9.786113339266028e-07, -2.60492608708626e-06),
    (7.1, 5.725322885877663e-07, -1.5451003667897704e-06),
    (8.7, 6.082608218774557e-09, -1.811187604617616e-08),
    (9.9, 1.5181958141049102e-10, -4.814495196468243e-10),
];
