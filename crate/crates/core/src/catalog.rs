//! The bit-exact catalog of morphisms the certified constructions rely on.
//!
//! Image strings live in data files shipped with the crate and are checked
//! against embedded SHA-256 digests on first access: a single-symbol
//! transcription slip would silently invalidate every downstream claim, so
//! the files are load-time verified rather than trusted.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::sync::LazyLock;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::morphism::Morphism;
use crate::word::Word;

/// A catalog morphism plus everything recorded about it: an optional coding
/// applied after it, the claimed square/antisquare inventories of its images
/// of squarefree words (nonempty only for the seven inventory morphisms),
/// and the recurrent factor used by the antisquare argument.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub morphism: Morphism,
    pub coding: Option<Morphism>,
    pub claimed_squares: BTreeSet<Word>,
    pub claimed_antisquares: BTreeSet<Word>,
    pub recurrent_witness: Option<Word>,
}

struct RawEntry {
    name: &'static str,
    sha256: &'static str,
    data: &'static str,
    coding_of: Option<&'static str>,
    squares: &'static [&'static str],
    antisquares: &'static [&'static str],
    witness: Option<&'static str>,
}

const RAW: &[RawEntry] = &[
    RawEntry {
        name: "h_3_13",
        sha256: "866e804759098ea2bb075da46ebe07d56586a7c4030d6e89fc8fe6f968182aff",
        data: include_str!("../data/h_3_13.morphism"),
        coding_of: None,
        squares: &["00", "11", "0101"],
        antisquares: &[
            "01", "10", "0011", "0110", "1001", "1100", "000111", "001110", "011100",
            "100011", "110001", "111000", "10010110",
        ],
        witness: Some("0101"),
    },
    RawEntry {
        name: "h_3_13_prime",
        sha256: "f662cac1580984453ca57a073e17e4601e546740e744a23a526439f2cfa39fc5",
        data: include_str!("../data/h_3_13_prime.morphism"),
        coding_of: None,
        squares: &["00", "11", "0101"],
        antisquares: &[
            "01", "10", "0011", "0110", "1001", "1100", "000111", "001110", "011100",
            "100011", "110001", "111000", "10010110",
        ],
        witness: Some("0101"),
    },
    RawEntry {
        name: "h_4_9",
        sha256: "5eafa1f7eb3ddbae2aeac0a734dd3ba0e43558b11ac13870f7c5ad73795dbbb3",
        data: include_str!("../data/h_4_9.morphism"),
        coding_of: None,
        squares: &["00", "11", "0000", "0101"],
        antisquares: &[
            "01", "10", "0011", "0110", "1100", "011100", "110001", "111000", "1110000011",
        ],
        witness: Some("0000"),
    },
    RawEntry {
        name: "h_5_5",
        sha256: "8f54e3d8aef43a680d9f73509683892302e67358b95806ba103f34ef232c9015",
        data: include_str!("../data/h_5_5.morphism"),
        coding_of: None,
        squares: &["00", "11", "0000", "0101", "1010"],
        antisquares: &["01", "10", "0011", "0110", "1100"],
        witness: Some("0000"),
    },
    RawEntry {
        name: "h_7_3",
        sha256: "121b6c24f4589b67e7ce900f042704da2c86e761cf8c081cdda48c3626f12173",
        data: include_str!("../data/h_7_3.morphism"),
        coding_of: None,
        squares: &["00", "0000", "0101", "1010", "001001", "010010", "100100"],
        antisquares: &["01", "10", "1001"],
        witness: Some("0000"),
    },
    RawEntry {
        name: "h_7_3_prime",
        sha256: "abb44137349e5c895fbdaf1a7d8e9a817be01a6e257844d26a57a9a6e0e4d7cb",
        data: include_str!("../data/h_7_3_prime.morphism"),
        coding_of: None,
        squares: &["00", "0000", "0101", "1010", "001001", "010010", "100100"],
        antisquares: &["01", "10", "1001"],
        witness: Some("0000"),
    },
    RawEntry {
        name: "h_9_2",
        sha256: "ede3baecb3d8ccb86771392acf4d0a48c9fb902139916e9bf9b1e911a1ea9989",
        data: include_str!("../data/h_9_2.morphism"),
        coding_of: None,
        squares: &[
            "00", "0000", "0101", "1010", "000000", "00010001", "00100010", "01000100",
            "10001000",
        ],
        antisquares: &["01", "10"],
        witness: Some("0000"),
    },
    RawEntry {
        name: "m_18",
        sha256: "db33a39457b4d6c549b16908c833fb0d2a0c33faf3ff12674ebcae7ab8344e18",
        data: include_str!("../data/m_18.morphism"),
        coding_of: None,
        squares: &[],
        antisquares: &[],
        witness: None,
    },
    RawEntry {
        name: "m_246",
        sha256: "2aa38d1c5aa5a5eb80b6ad479585a8d209632f5e1d31a361a9f46fc55b5c460f",
        data: include_str!("../data/m_246.morphism"),
        coding_of: None,
        squares: &[],
        antisquares: &[],
        witness: None,
    },
    RawEntry {
        name: "thm4",
        sha256: "d39e9d83f4a926f2c3a578cfb320e75645ad63d8b0d35f71e02a57efca514a64",
        data: include_str!("../data/thm4_base.morphism"),
        coding_of: Some("thm4_coding"),
        squares: &[],
        antisquares: &[],
        witness: None,
    },
    RawEntry {
        name: "thm7",
        sha256: "ede0314102cebd43bcf00b823347e7ef12e0129ec108cda96a7ee3c531769331",
        data: include_str!("../data/thm7_base.morphism"),
        coding_of: Some("thm7_coding"),
        squares: &[],
        antisquares: &[],
        witness: None,
    },
];

const CODINGS: &[(&str, &str, &str)] = &[
    (
        "thm4_coding",
        "0a3411d7e3437b8b827083b04ad7e632e0ba3aef308e49fc219f42cce2429cb5",
        include_str!("../data/thm4_coding.morphism"),
    ),
    (
        "thm7_coding",
        "a8ca1216448cd999af3b62a851dbeafe32e08fc236205b2e4349185935181b8f",
        include_str!("../data/thm7_coding.morphism"),
    ),
];

fn checked_parse(name: &str, sha256: &str, data: &str) -> Morphism {
    let digest = hex(&Sha256::digest(data.as_bytes()));
    assert_eq!(
        digest, sha256,
        "catalog data file for `{name}` does not match its embedded digest"
    );
    data.parse()
        .unwrap_or_else(|e| panic!("catalog data file for `{name}` unparsable: {e}"))
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

static CATALOG: LazyLock<BTreeMap<&'static str, CatalogEntry>> = LazyLock::new(|| {
    let codings: BTreeMap<&str, Morphism> = CODINGS
        .iter()
        .map(|(name, sha, data)| (*name, checked_parse(name, sha, data)))
        .collect();
    RAW.iter()
        .map(|raw| {
            let entry = CatalogEntry {
                name: raw.name,
                morphism: checked_parse(raw.name, raw.sha256, raw.data),
                coding: raw.coding_of.map(|c| codings[c].clone()),
                claimed_squares: raw.squares.iter().map(|s| s.parse().unwrap()).collect(),
                claimed_antisquares: raw.antisquares.iter().map(|s| s.parse().unwrap()).collect(),
                recurrent_witness: raw.witness.map(|s| s.parse().unwrap()),
            };
            (raw.name, entry)
        })
        .collect()
});

pub fn catalog_lookup(name: &str) -> Result<&'static CatalogEntry> {
    CATALOG
        .get(name)
        .ok_or_else(|| Error::UnknownCatalogEntry(name.to_string()))
}

pub fn catalog_names() -> Vec<&'static str> {
    CATALOG.keys().copied().collect()
}

/// The seven morphisms with claimed square/antisquare inventories, ordered
/// as documented.
pub const INVENTORY_MORPHISMS: &[&str] = &[
    "h_3_13",
    "h_3_13_prime",
    "h_4_9",
    "h_5_5",
    "h_7_3",
    "h_7_3_prime",
    "h_9_2",
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup_unknown_name() {
        assert!(catalog_lookup("h_1_1").is_err());
    }

    #[test]
    fn uniform_lengths_match_names() {
        for (name, q) in [
            ("h_3_13", 216),
            ("h_4_9", 55),
            ("h_5_5", 36),
            ("h_7_3", 29),
            ("h_9_2", 22),
            ("m_18", 18),
            ("m_246", 246),
        ] {
            let e = catalog_lookup(name).unwrap();
            assert_eq!(e.morphism.uniform_length(), Some(q), "{name}");
        }
    }

    #[test]
    fn non_uniform_image_lengths() {
        let e = catalog_lookup("h_3_13_prime").unwrap();
        let lens: Vec<usize> = e.morphism.images().iter().map(Word::len).collect();
        assert_eq!(lens, [16, 12, 8]);
        let e = catalog_lookup("h_7_3_prime").unwrap();
        let lens: Vec<usize> = e.morphism.images().iter().map(Word::len).collect();
        assert_eq!(lens, [19, 14, 13]);
    }

    #[test]
    fn image_ordering_and_nonerasing() {
        for name in INVENTORY_MORPHISMS {
            let h = &catalog_lookup(name).unwrap().morphism;
            assert!(h.is_nonerasing());
            let lens: Vec<usize> = h.images().iter().map(Word::len).collect();
            let mut sorted = lens.clone();
            sorted.sort_unstable_by(|a, b| b.cmp(a));
            assert_eq!(lens, sorted, "{name}: images must be length-nonincreasing");
        }
    }

    #[test]
    fn spot_check_images() {
        let h55 = &catalog_lookup("h_5_5").unwrap().morphism;
        assert_eq!(
            h55.image(2).to_string(),
            "101000001010000110000010100000110000"
        );
        let hp = &catalog_lookup("h_3_13_prime").unwrap().morphism;
        assert_eq!(hp.image(0).to_string(), "0010110011100011");
    }

    #[test]
    fn inventory_counts_match_names() {
        for (name, a, b) in [
            ("h_3_13", 3, 13),
            ("h_3_13_prime", 3, 13),
            ("h_4_9", 4, 9),
            ("h_5_5", 5, 5),
            ("h_7_3", 7, 3),
            ("h_7_3_prime", 7, 3),
            ("h_9_2", 9, 2),
        ] {
            let e = catalog_lookup(name).unwrap();
            assert_eq!(e.claimed_squares.len(), a, "{name} squares");
            assert_eq!(e.claimed_antisquares.len(), b, "{name} antisquares");
        }
    }

    #[test]
    fn codings_present() {
        let e4 = catalog_lookup("thm4").unwrap();
        assert_eq!(e4.morphism.domain_size(), 8);
        assert_eq!(e4.morphism.uniform_length(), Some(2));
        let c4 = e4.coding.as_ref().unwrap();
        assert!(c4.is_coding());
        // mod-2 coding
        for i in 0..8 {
            assert_eq!(c4.image(i).symbols(), &[i % 2]);
        }
        let e7 = catalog_lookup("thm7").unwrap();
        assert_eq!(e7.morphism.domain_size(), 6);
        let c7 = e7.coding.as_ref().unwrap();
        // floor(n/3) coding
        for i in 0..6 {
            assert_eq!(c7.image(i).symbols(), &[i / 3]);
        }
    }
}
