//! Shared fixtures for the crate's unit tests.

use crate::groups::builtin_group;
use crate::groups::{Elem, ExtensionData};

/// The extension instances exercised throughout the suites:
/// `Z2 -> Z4`, `Z3 -> S3`, `center(Q8) -> Q8` and the split `Z2 -> Z2xZ2`.
pub fn builtin_extension_suite() -> Vec<ExtensionData> {
    let z4 = builtin_group("Z4").unwrap();
    let s3 = builtin_group("S3").unwrap();
    let a3: Vec<Elem> = s3
        .elements()
        .filter(|&a| s3.element_order(a) != 2)
        .collect();
    let q8 = builtin_group("Q8").unwrap();
    let v4 = builtin_group("Z2xZ2").unwrap();
    vec![
        ExtensionData::from_normal_subgroup(&z4, &[0, 2]).unwrap(),
        ExtensionData::from_normal_subgroup(&s3, &a3).unwrap(),
        ExtensionData::from_normal_subgroup(&q8, &q8.center()).unwrap(),
        ExtensionData::from_normal_subgroup(&v4, &[0, 1]).unwrap(),
    ]
}

/// The central extensions of the suite.
pub fn central_extension_suite() -> Vec<ExtensionData> {
    builtin_extension_suite()
        .into_iter()
        .filter(|e| e.is_central())
        .collect()
}
