//! Scenarios and data files bundled into the binary.

macro_rules! bundle {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../scenarios/", $name, ".cfg")))),*]
    };
}

/// `(name, config text)`, in listing order.
pub const SCENARIOS: &[(&str, &str)] = bundle!(
    "sphere_cp2",
    "sphere_ch2",
    "tube_cp1_in_cp2",
    "tube_cp1_in_cp3",
    "tube_quadric_cp2",
    "tube_quadric_cp3",
    "tube_rp2_in_cp2",
    "singular_sextic",
    "duality_quadric",
    "hyperplane_dual_point",
);

const FILES: &[(&str, &str)] = &[("sextic.poly", include_str!("../scenarios/sextic.poly"))];

pub fn scenario(name: &str) -> Option<&'static str> {
    SCENARIOS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn embedded_file(name: &str) -> Option<&'static str> {
    FILES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}
