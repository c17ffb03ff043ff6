//! Instances shared by the benchmarks.

use anticyclo_core::pipeline::InstanceConfig;

/// 21a1 at 3 over Q(sqrt -120), at the given precision.
pub fn conductor_21(prec: i64) -> InstanceConfig {
    let text = format!("curve = 1 0 0 -4 -1\nd = -120\np = 3\nprec = {prec}\ndegree = {}\n", prec + 4);
    InstanceConfig::parse(&text).unwrap()
}

/// 35a1 at 7 over Q(sqrt -7) with a point of the twist.
pub fn conductor_35(prec: i64) -> InstanceConfig {
    let text = format!("curve = 0 1 1 9 1\nd = -7\np = 7\nprec = {prec}\ndegree = {}\npoint = twist -48 540\n", prec + 4);
    InstanceConfig::parse(&text).unwrap()
}
