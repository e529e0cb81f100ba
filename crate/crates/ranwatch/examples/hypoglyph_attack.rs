//! Unicode hypoglyph substitution up close: apply the builtin confusable
//! map to a message name, inspect the codepoints, and verify the skeleton
//! round trip.
//!
//! ```bash
//! cargo run -p ranwatch --example hypoglyph_attack
//! ```

use ranwatch::hypoglyph::{apply, contains_hypoglyph, skeleton, SubstitutionMap};

fn dump(label: &str, text: &str) {
    println!("{label}: {text}");
    println!(
        "  codepoints: {}",
        text.chars().map(|c| format!("U+{:04X}", c as u32)).collect::<Vec<_>>().join(" ")
    );
}

fn main() {
    let map = SubstitutionMap::builtin();
    println!("builtin substitution map:");
    for (src, dst) in map.iter() {
        println!("  '{src}' (U+{:04X}) -> '{dst}' (U+{:04X})", src as u32, dst as u32);
    }

    let original = "RRCSetupRequest";
    let manipulated = apply(original, &map);
    println!();
    dump("original   ", original);
    dump("manipulated", &manipulated);

    println!();
    println!("rendered identically?        the two lines above look the same");
    println!("byte-identical?              {}", original == manipulated);
    println!("same codepoint count?        {}", original.chars().count() == manipulated.chars().count());
    println!("contains_hypoglyph(original) {}", contains_hypoglyph(original));
    println!("contains_hypoglyph(attacked) {}", contains_hypoglyph(&manipulated));
    println!("skeleton(attacked)           {}", skeleton(&manipulated));
    println!("skeletons equal?             {}", skeleton(&manipulated) == skeleton(original));
}
