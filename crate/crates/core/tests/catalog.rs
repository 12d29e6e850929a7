//! Built-in code data checked against an independent copy of the published
//! matrices, plus checksums that pin the shipped files.

use msd_core::catalog::{builtin, builtin_source};
use msd_core::pauli::{css_distance, standard_form, validate_code};
use msd_core::{PauliOperator, StabilizerCode};
use sha2::{Digest, Sha256};

mod common;
use common::{find_relabeling, same_group, same_logicals};

// 0/1 rows copied from the parity-check matrices (X block, then Z block).
const F_CAN_X: &[&str] = &["101010101010101", "011001100110011", "000111100001111", "000000011111111"];
const F_CAN_Z: &[&str] = &[
    "101010101010101",
    "011001100110011",
    "000111100001111",
    "000000011111111",
    "001000100010001",
    "000010100000101",
    "000001100000011",
    "000000000110011",
    "000000000001111",
    "000000001010101",
];
const F_STD_X: &[&str] = &["100010111011001", "010001101110011", "001011100001111", "000100010111111"];
const F_STD_Z: &[&str] = &[
    "010110000000001",
    "100101000000001",
    "111000100000000",
    "011000010000001",
    "001100001000001",
    "101000000100001",
    "110100000010000",
    "101100000001000",
    "110000000000101",
    "011100000000010",
];
const T_CAN_X: &[&str] = &["10101011010101", "01100110110011", "00011110001111"];
const T_CAN_Z: &[&str] = &[
    "01111000000000",
    "10110100000000",
    "11010010000000",
    "11000001100000",
    "10100001010000",
    "10010001001000",
    "01100000001100",
    "00110001000010",
    "01010001000001",
];
const T_STD_X: &[&str] = &["10011110011001", "01010101110011", "00101101001111"];
const T_STD_Z: &[&str] = &[
    "01010000000011",
    "00101000000011",
    "11100100000000",
    "01100010000001",
    "11100001000011",
    "10100000100001",
    "10100000010010",
    "11000000001010",
    "11000000000101",
];

fn expand(rows: &[&str], letter: char) -> Vec<String> {
    rows.iter().map(|r| r.chars().map(|c| if c == '1' { letter } else { 'I' }).collect()).collect()
}

fn letters(ops: &[PauliOperator]) -> Vec<String> {
    ops.iter().map(|p| p.unsigned().to_string()).collect()
}

fn check_transcription(name: &str, hx: &[&str], hz: &[&str], lx: &[&str], lz: &[&str]) {
    let code = builtin(name).unwrap();
    let mut expected = expand(hx, 'X');
    expected.extend(expand(hz, 'Z'));
    assert_eq!(letters(&code.generators), expected, "{name} generators");
    assert!(code.generators.iter().all(|g| g.phase() == 0), "{name} signs");
    assert_eq!(letters(&code.logical_x), lx, "{name} logical X");
    assert_eq!(letters(&code.logical_z), lz, "{name} logical Z");
}

#[test]
fn fifteen_canonical_matches_published_matrices() {
    check_transcription("15-1-3-canonical", F_CAN_X, F_CAN_Z, &["X".repeat(15).as_str()], &["Z".repeat(15).as_str()]);
}

#[test]
fn fifteen_standard_matches_published_matrices() {
    check_transcription("15-1-3-standard", F_STD_X, F_STD_Z, &["IIIIXXIXXXIIXIX"], &["ZZZZIIIIIIIIIIZ"]);
}

#[test]
fn fourteen_canonical_matches_published_matrices() {
    check_transcription(
        "14-2-2-canonical",
        T_CAN_X,
        T_CAN_Z,
        &["XXXXXXXIIIIIII", "IIIIIIIXXXXXXX"],
        &["ZZZZZZZIIIIIII", "IIIIIIIZZZZZZZ"],
    );
}

#[test]
fn fourteen_standard_matches_published_matrices() {
    check_transcription(
        "14-2-2-standard",
        T_STD_X,
        T_STD_Z,
        &["IIIIIIXIXXXXXX", "IIIXXIXXXIIXIX"],
        &["IZZIIIIIIIIIZI", "ZIIIIIIIIIIIZZ"],
    );
}

#[test]
fn canonical_z_block_contains_x_block() {
    // The [[15,1,3]] canonical H_Z starts with the rows of H_X.
    assert_eq!(&F_CAN_Z[..4], F_CAN_X);
}

#[test]
fn shipped_files_are_pinned() {
    let expected = [
        ("14-2-2-canonical", "1cfe01ecd847569f3e40539bf6b3c4d67392b5031bfe249388a63bbb36be720f"),
        ("14-2-2-standard", "42637f18a2abc5dc890d403c47ca7bc4add6378086ea40f29fcf41c9ed817f6e"),
        ("15-1-3-canonical", "ba58d75ce9bd45c153c9f7d601b43306d457ddc6f7dddc829b1d08a633c2a322"),
        ("15-1-3-standard", "0c7e1ec87d8a9d0bfd9f23baa8aa46f345a14720120093a5e3cd544fe5be7069"),
        ("4-2-2", "01c40d7604b4a60e4cc754ba1741e961d5d55b26c7002f35be7bd5913bf30a97"),
        ("5-1-3", "d1710e71c4a074a05335af6250e57610285ed64f73b407af91068c920fcdf264"),
        ("steane-7-1-3", "7406ec9aa25f1e3698e0d8039979354ba97aa7368596f49d6a90ac5e64294a45"),
    ];
    for (name, sha) in expected {
        let digest = Sha256::digest(builtin_source(name).unwrap().as_bytes());
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        assert_eq!(hex, sha, "{name}");
    }
}

#[test]
fn builtins_validate_and_have_expected_distance() {
    for (name, n, k, d) in [
        ("15-1-3-canonical", 15, 1, 3),
        ("15-1-3-standard", 15, 1, 3),
        ("14-2-2-canonical", 14, 2, 2),
        ("14-2-2-standard", 14, 2, 2),
        ("4-2-2", 4, 2, 2),
        ("steane-7-1-3", 7, 1, 3),
    ] {
        let code = builtin(name).unwrap();
        assert_eq!((code.n, code.k), (n, k), "{name}");
        let diag = validate_code(&code);
        assert!(diag.is_valid(), "{name}: {:?}", diag.violations);
        assert!(diag.is_css);
        assert_eq!(css_distance(&code).unwrap().d, d, "{name}");
    }
    let five = builtin("5-1-3").unwrap();
    assert!(validate_code(&five).is_valid());
    assert!(!five.is_css());
}

#[test]
fn canonical_and_standard_are_the_same_code_up_to_relabeling() {
    for stem in ["15-1-3", "14-2-2"] {
        let can = builtin(&format!("{stem}-canonical")).unwrap();
        let std = builtin(&format!("{stem}-standard")).unwrap();
        // The published standard form is written in a permuted qubit order.
        assert!(!same_group(&can, &std));
        let perm = find_relabeling(&can, &std).unwrap_or_else(|| panic!("{stem}: no relabeling"));
        let moved = can.permuted(&perm);
        assert!(same_group(&moved, &std), "{stem}");
        assert!(same_logicals(&moved, &std), "{stem}");
    }
}

#[test]
fn elimination_preserves_the_group() {
    for name in ["15-1-3-canonical", "14-2-2-canonical", "15-1-3-standard", "14-2-2-standard"] {
        let code = builtin(name).unwrap();
        let sf = standard_form(&code.parity_check()).unwrap();
        assert!(sf.block_structure_holds(), "{name}");
        let rows: Vec<PauliOperator> = sf.matrix.rows().iter().map(|r| sf.unpermute(r)).collect();
        let eliminated = StabilizerCode::new_unchecked("e", rows, vec![], vec![], code.convention).unwrap();
        assert!(same_group(&eliminated, &code), "{name}");
    }
}
