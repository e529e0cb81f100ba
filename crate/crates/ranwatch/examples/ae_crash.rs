//! The encoding failure that kills the traditional baseline: on a dataset
//! with hypoglyphed messages, the autoencoder run dies at the first
//! manipulated name it meets, for every window size.
//!
//! ```bash
//! cargo run --release -p ranwatch --example ae_crash
//! ```

use anyhow::Result;

use ranwatch::ae::AeModel;
use ranwatch::eval::{run_ae_experiment, EvalOptions};
use ranwatch::forge::{forge_dataset, ForgeConfig, TRAIN_SPLIT};
use ranwatch::message::Label;

fn main() -> Result<()> {
    let forged = forge_dataset(&ForgeConfig::default())?;
    let first_hypoglyph = forged.hypoglyph_seqs[0];
    println!(
        "dataset: {} messages, hypoglyphed seqs {:?}",
        forged.messages.len(),
        forged.hypoglyph_seqs
    );

    let training: Vec<_> = forged
        .messages
        .iter()
        .filter(|m| m.label == Label::Normal)
        .take(TRAIN_SPLIT as usize)
        .map(|m| m.view())
        .collect();

    let opts = EvalOptions::default();
    for w in [1usize, 5, 10] {
        let model = AeModel::train(&training, w, &Default::default(), 42)?;
        let report = run_ae_experiment(&forged.messages, &model, &opts)?;
        println!("\nw={w}:");
        println!("  verdicts emitted: {}", report.messages_evaluated);
        println!("  messages never judged: {}", report.messages_skipped);
        println!("  terminated_early: {:?}", report.terminated_early);
        println!("  reason: {}", report.termination_reason.as_deref().unwrap_or("-"));
        assert_eq!(report.terminated_early, Some(first_hypoglyph));
    }

    println!(
        "\nevery run died at seq {first_hypoglyph}, the first hypoglyphed message; \
         the remaining {} messages of the test split were never examined",
        1016 - first_hypoglyph
    );
    Ok(())
}
