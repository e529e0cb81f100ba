//! Train one autoencoder, inspect its calibration, and round-trip it
//! through a model file.
//!
//! ```bash
//! cargo run --release -p ranwatch --example train_autoencoder
//! ```

use anyhow::Result;

use ranwatch::ae::{reuse_flags, AeModel, TrainParams};
use ranwatch::forge::{forge_dataset, ForgeConfig, TRAIN_SPLIT};
use ranwatch::message::Label;
use ranwatch::window::window_for;

fn main() -> Result<()> {
    let forged = forge_dataset(&ForgeConfig::default())?;
    let training: Vec<_> = forged
        .messages
        .iter()
        .filter(|m| m.label == Label::Normal)
        .take(TRAIN_SPLIT as usize)
        .map(|m| m.view())
        .collect();

    let w = 3;
    let params = TrainParams::default();
    println!(
        "training w={w} on {} normal messages ({} epochs max, lr {})",
        training.len(),
        params.epochs,
        params.learning_rate
    );
    let model = AeModel::train(&training, w, &params, 42)?;
    println!("  vocabulary: {} names: {:?}", model.vocabulary.len(), model.vocabulary.names());
    println!("  input dimension: {}", w * (model.vocabulary.len() + 1));
    println!("  epochs run: {}", model.epochs_run);
    println!("  final loss: {:.6e}", model.final_loss);
    println!("  threshold (99th percentile of training errors): {:.6e}", model.threshold);

    // score a few training windows: all comfortably Normal
    let flags = reuse_flags(&training);
    println!("\nsample training-window scores:");
    for i in [10usize, 100, 500] {
        let window = window_for(&training, i, w)?;
        let score = model.score(&window, &flags[i + 1 - w..=i])?;
        println!("  window at {i}: error {:.3e} -> {:?}", score.error, score.verdict);
    }

    std::fs::create_dir_all("ranwatch-out")?;
    let path = "ranwatch-out/ae_w3.json";
    model.save(path.as_ref())?;
    let loaded = AeModel::load(path.as_ref())?;
    let window = window_for(&training, 250, w)?;
    let a = model.score(&window, &flags[248..=250])?;
    let b = loaded.score(&window, &flags[248..=250])?;
    println!("\nsaved to {path}; reloaded score bit-identical? {}", a.error.to_bits() == b.error.to_bits());
    Ok(())
}
