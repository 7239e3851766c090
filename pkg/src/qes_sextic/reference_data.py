"""Published reference values, as printed (10 decimals), plus recomputed ones.

``PUBLISHED_*`` are transcriptions of the printed tables and are never edited.
``RECOMPUTED_CRITICAL`` holds a_crit(J)^2 for the J where the printed value
disagrees with the characteristic polynomial: by one unit in the last printed
place at J=15, by 4e-9 to 2e-5 elsewhere.  Sturm bisection and the exact
discriminant root agree on every entry to the digits shown; J=10, 14, 16, 18,
19, 20 were also confirmed with 80-digit dense eigenvalues.
"""

from __future__ import annotations

PUBLISHED_CRITICAL = {
    2: "2",
    3: "10.5874700363",
    4: "20.5515334397",
    5: "31.0534552654",
    6: "41.8519569727",
    7: "52.8409390328",
    8: "63.9636348939",
    9: "75.1858755649",
    10: "86.4853951835",
    11: "97.8468072286",
    12: "109.2590335351",
    13: "120.7137913596",
    14: "132.2047259144",
    15: "143.7268461067",
    16: "155.2761720922",
    17: "166.8494020446",
    18: "178.4439117241",
    19: "190.0574079492",
    20: "201.6880273595",
}

# a_crit(J+1)^2 - a_crit(J)^2, keyed by the lower J
PUBLISHED_DIFFERENCES = {
    2: "8.5874700363",
    3: "9.9640634033",
    4: "10.5019218257",
    5: "10.7985017073",
    6: "10.9889820601",
    7: "11.1226958611",
    8: "11.2222406710",
    9: "11.2995196186",
    10: "11.3614120451",
    11: "11.4122263065",
    12: "11.4547578245",
    13: "11.4909345548",
    14: "11.5221201923",
    15: "11.5493064512",
    16: "11.5732299524",
    17: "11.5945096795",
    18: "11.6134962251",
    19: "11.6306193103",
}

PUBLISHED_R1 = {
    1: "11.3406567704",
    2: "11.5776386705",
    3: "11.6882413518",
    4: "11.7509034718",
    5: "11.7912648657",
    6: "11.8195095305",
    7: "11.8404722516",
    8: "11.8565514577",
    9: "11.8695546582",
    10: "11.8800730055",
    11: "11.8888785336",
    12: "11.8963479526",
    13: "11.9027717144",
    14: "11.9083609386",
    15: "11.9132728866",
    16: "11.9176271918",
}

# repeated extrapolants of R_1: PUBLISHED_REPEATED[r][n] is r further
# passes applied to R_1, at index n
PUBLISHED_REPEATED = {
    1: {
        1: "11.8146205706", 2: "11.9094467145", 3: "11.9388898318", 4: "11.9527104409",
        5: "11.9607328547", 6: "11.9662485785", 7: "11.9691059005", 8: "11.9735802620",
        9: "11.9747381309", 10: "11.9769338144", 11: "11.9785115620", 12: "11.9798568565",
    },
    2: {
        1: "12.0042728584", 2: "11.9977760665", 3: "11.9941722683", 4: "11.9928225095",
        5: "11.9938271976", 6: "11.9862498326", 7: "12.0049007928", 8: "11.9840010818",
        9: "11.9966949661", 10: "11.9942890380", 11: "11.9946550959",
    },
    3: {
        1: "11.9912792745", 2: "11.9869646719", 3: "11.9887732331", 4: "11.9978459499",
        5: "11.9483630075", 6: "12.1168065542", 7: "11.8377031045", 8: "12.0982460411",
        9: "11.9726356846", 10: "11.9983156753",
    },
}

RECOMPUTED_CRITICAL = {
    10: "86.485391339760",
    14: "132.204725909944",
    15: "143.726846106574",
    16: "155.276155697333",
    18: "178.443900050604",
    19: "190.057405655759",
    20: "201.688022979535",
}
