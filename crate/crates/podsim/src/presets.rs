//! Config documents for the standard conditions, bundled into the binary.
//! Select one on the command line with `preset:<name>`.

macro_rules! bundle {
    ($($name:literal),* $(,)?) => {
        const ALL: &[(&str, &str)] = &[
            $(($name, include_str!(concat!("../presets/", $name, ".json")))),*
        ];
    };
}

bundle! {
    "ba-complex-gradual",
    "ba-complex-single",
    "ba-complex-split",
    "ba-dcc-gradual",
    "ba-dcc-single",
    "ba-dcc-split",
    "ba-simple-gradual",
    "ba-simple-single",
    "ba-simple-split",
    "beta-linear-gullible",
    "beta-linear-normal",
    "beta-linear-stubborn",
    "beta-sigmoid-gullible",
    "beta-sigmoid-normal",
    "beta-sigmoid-stubborn",
    "beta-threshold-gullible",
    "beta-threshold-normal",
    "beta-threshold-stubborn",
    "er-complex-gradual",
    "er-complex-single",
    "er-complex-split",
    "er-dcc-gradual",
    "er-dcc-single",
    "er-dcc-split",
    "er-simple-gradual",
    "er-simple-single",
    "er-simple-split",
    "graph-ba",
    "graph-er",
    "graph-mag",
    "graph-ws",
    "homophily-er",
    "homophily-mag",
    "mag-complex-gradual",
    "mag-complex-single",
    "mag-complex-split",
    "mag-dcc-gradual",
    "mag-dcc-single",
    "mag-dcc-split",
    "mag-simple-gradual",
    "mag-simple-single",
    "mag-simple-split",
    "model-dcc",
    "table2-ba",
    "table2-er",
    "table2-mag",
    "table2-ws",
    "ws-complex-gradual",
    "ws-complex-single",
    "ws-complex-split",
    "ws-dcc-gradual",
    "ws-dcc-single",
    "ws-dcc-split",
    "ws-simple-gradual",
    "ws-simple-single",
    "ws-simple-split",
}

pub const TOPOLOGIES: [&str; 4] = ["er", "ws", "ba", "mag"];
pub const MODELS: [&str; 3] = ["simple", "complex", "dcc"];
pub const SCHEDULES: [&str; 3] = ["single", "split", "gradual"];
pub const BETA_FAMILIES: [&str; 3] = ["linear", "threshold", "sigmoid"];
pub const DISPOSITIONS: [&str; 3] = ["gullible", "normal", "stubborn"];

pub fn get(name: &str) -> Option<&'static str> {
    ALL.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

pub fn names() -> impl Iterator<Item = &'static str> {
    ALL.iter().map(|(n, _)| *n)
}

/// The 36 topology × model × schedule conditions, in suite order.
pub fn figure_conditions() -> Vec<String> {
    let mut out = Vec::new();
    for t in TOPOLOGIES {
        for m in MODELS {
            for s in SCHEDULES {
                out.push(format!("{t}-{m}-{s}"));
            }
        }
    }
    out
}

/// The nine cognitive-function conditions on the smaller ER graph.
pub fn beta_conditions() -> Vec<String> {
    let mut out = Vec::new();
    for f in BETA_FAMILIES {
        for d in DISPOSITIONS {
            out.push(format!("beta-{f}-{d}"));
        }
    }
    out
}
