//! Bundled family documents used by the interpolation suite.

pub const FAMILIES: &[(&str, &str)] = &[
    ("01-line-four-points", include_str!("../fixtures/families/01-line-four-points.json")),
    ("02-quadratic-four-points", include_str!("../fixtures/families/02-quadratic-four-points.json")),
    ("03-quadratic-q5", include_str!("../fixtures/families/03-quadratic-q5.json")),
    ("04-trace-T-q3", include_str!("../fixtures/families/04-trace-T-q3.json")),
    ("05-trace-T-q5", include_str!("../fixtures/families/05-trace-T-q5.json")),
    ("06-det-one-q7", include_str!("../fixtures/families/06-det-one-q7.json")),
    ("07-sign-twist-q3", include_str!("../fixtures/families/07-sign-twist-q3.json")),
    ("08-quartic-character-q5", include_str!("../fixtures/families/08-quartic-character-q5.json")),
    ("09-cubic-character-q7", include_str!("../fixtures/families/09-cubic-character-q7.json")),
    ("10-induced-twisted-q3", include_str!("../fixtures/families/10-induced-twisted-q3.json")),
    ("11-three-points-q7", include_str!("../fixtures/families/11-three-points-q7.json")),
    ("12-gaussian-points-q5", include_str!("../fixtures/families/12-gaussian-points-q5.json")),
    ("13-root-five-q3", include_str!("../fixtures/families/13-root-five-q3.json")),
    ("14-root-two-q3", include_str!("../fixtures/families/14-root-two-q3.json")),
    ("15-two-points-induced-q3", include_str!("../fixtures/families/15-two-points-induced-q3.json")),
    ("16-layer-mod-49", include_str!("../fixtures/families/16-layer-mod-49.json")),
    ("17-layer-gaussian-169", include_str!("../fixtures/families/17-layer-gaussian-169.json")),
    ("18-layer-mod-5", include_str!("../fixtures/families/18-layer-mod-5.json")),
    ("19-layer-z8-mod-17", include_str!("../fixtures/families/19-layer-z8-mod-17.json")),
    ("20-layer-cubic-169", include_str!("../fixtures/families/20-layer-cubic-169.json")),
    ("21-level-one-q3", include_str!("../fixtures/families/21-level-one-q3.json")),
];
