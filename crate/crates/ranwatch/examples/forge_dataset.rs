//! Forge the default evaluation dataset and write it to disk.
//!
//! ```bash
//! cargo run -p ranwatch --example forge_dataset
//! ```

use anyhow::Result;

use ranwatch::dataset::write_dataset;
use ranwatch::forge::{forge_dataset, ForgeConfig};
use ranwatch::message::Label;

fn main() -> Result<()> {
    let config = ForgeConfig::default();
    let forged = forge_dataset(&config)?;

    println!(
        "forged {} messages over {} UEs (seed {})",
        forged.messages.len(),
        config.n_ue,
        config.seed
    );
    println!("  BlindDoS injections: {}", forged.attack_count());
    println!("  hypoglyphed:        {} at seqs {:?}", forged.manipulated_count(), forged.hypoglyph_seqs);

    println!("\nfirst benign session:");
    for msg in forged.messages.iter().take(12) {
        println!("  seq {:4}  {}", msg.seq, msg.view().render());
    }

    let first_attack = forged
        .messages
        .iter()
        .find(|m| m.label == Label::BlindDos)
        .expect("default config injects attacks");
    println!("\nfirst Blind DoS injection (seq {}):", first_attack.seq);
    for msg in &forged.messages[first_attack.seq as usize - 2..=first_attack.seq as usize + 2] {
        let marker = if msg.label == Label::BlindDos { "  <-- injected, TMSI reused" } else { "" };
        println!("  seq {:4}  {}{marker}", msg.seq, msg.view().render());
    }

    let hypo = &forged.messages[forged.hypoglyph_seqs[0] as usize];
    println!("\nfirst hypoglyphed message (seq {}):", hypo.seq);
    println!("  rendered: {}", hypo.name);
    println!(
        "  codepoints: {}",
        hypo.name
            .chars()
            .map(|c| format!("U+{:04X}", c as u32))
            .collect::<Vec<_>>()
            .join(" ")
    );

    std::fs::create_dir_all("ranwatch-out")?;
    let path = "ranwatch-out/dataset.jsonl";
    write_dataset(&forged.messages, path.as_ref())?;
    println!("\nwrote {path}");
    Ok(())
}
