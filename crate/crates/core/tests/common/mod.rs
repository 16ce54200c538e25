#![allow(dead_code)]

use surftop_core::{parse_polynomial, MPoly};

pub const S1: &str = "(x^2-1)^2+(y^2-1)^2+(z^2-1)^2-3/2";
pub const S2: &str = "(x^2+y^2-1)^2+z^2";
pub const S5: &str = "x^2+y^2+z^2+2*x*y*z-1";
pub const S6: &str = "(x^2-1)^2+(y^2-1)^2+(z^2-1)^2-3/4";
pub const SPHERE: &str = "x^2+y^2+z^2-1";
pub const WHITNEY: &str = "x^2-y^2*z";

pub fn poly(s: &str) -> MPoly {
    parse_polynomial(s).unwrap()
}
