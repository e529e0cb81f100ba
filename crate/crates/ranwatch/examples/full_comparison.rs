//! The headline experiment, end to end:
//!
//! 1. forge the manipulated dataset (1,016 messages, 20 Blind DoS, 5
//!    hypoglyphed) and a clean twin (no hypoglyphs),
//! 2. train one autoencoder per window size 1..=10 on the first 700 normal
//!    messages,
//! 3. run the autoencoder sweep on both datasets: competent on the clean
//!    one, dead at the first hypoglyph on the manipulated one,
//! 4. run the LLM detector (mock rule backend) over the manipulated
//!    dataset: all 1,016 messages processed, no early termination.
//!
//! ```bash
//! cargo run --release -p ranwatch --example full_comparison
//! ```

use std::time::Instant;

use anyhow::Result;

use ranwatch::ae::AeModel;
use ranwatch::eval::{render_table, sweep_ae, sweep_llm, write_combined_csv, EvalOptions};
use ranwatch::forge::{forge_dataset, ForgeConfig};
use ranwatch::llm::{MockRuleBackend, PromptTemplate};
use ranwatch::message::{Label, MessageCatalog};
use ranwatch::{RunConfig, TRAIN_SPLIT};

fn main() -> Result<()> {
    let config = RunConfig::default();
    let started = Instant::now();

    let manipulated = forge_dataset(&config.forge)?;
    let clean = forge_dataset(&ForgeConfig {
        n_hypoglyph_attacks: 0,
        n_hypoglyph_normals: 0,
        ..config.forge.clone()
    })?;
    println!(
        "forged {} messages: {} BlindDoS, {} hypoglyphed at seqs {:?}",
        manipulated.messages.len(),
        manipulated.attack_count(),
        manipulated.manipulated_count(),
        manipulated.hypoglyph_seqs
    );

    let training: Vec<_> = manipulated
        .messages
        .iter()
        .filter(|m| m.label == Label::Normal)
        .take(TRAIN_SPLIT as usize)
        .map(|m| m.view())
        .collect();
    println!("\ntraining 10 autoencoders on {} normal messages...", training.len());
    let mut models = Vec::new();
    for w in 1..=10 {
        let t = Instant::now();
        let model = AeModel::train(&training, w, &config.ae, config.forge.seed)?;
        println!(
            "  w={w:2}: threshold {:.3e}, loss {:.3e} after {} epochs ({:.1}s)",
            model.threshold,
            model.final_loss,
            model.epochs_run,
            t.elapsed().as_secs_f64()
        );
        models.push(model);
    }

    let opts = EvalOptions {
        seed: Some(config.forge.seed),
        ..EvalOptions::default()
    };

    println!("\n=== autoencoder on the clean dataset (test split, seq >= {TRAIN_SPLIT}) ===");
    let ae_clean = sweep_ae(&clean.messages, &models, &opts);
    print!("{}", render_table(&ae_clean));

    println!("=== autoencoder on the manipulated dataset ===");
    let ae_manipulated = sweep_ae(&manipulated.messages, &models, &opts);
    print!("{}", render_table(&ae_manipulated));
    for report in &ae_manipulated {
        if let Some(seq) = report.terminated_early {
            println!(
                "  w={:2}: terminated at seq {seq} after {} verdicts",
                report.window_size, report.messages_evaluated
            );
        }
    }

    println!("\n=== LLM detector (mock rule backend) on the manipulated dataset ===");
    let template = PromptTemplate::default();
    let llm_reports = sweep_llm(&manipulated.messages, &template, &opts, |_| {
        Box::new(MockRuleBackend::new(&MessageCatalog::default()))
    });
    print!("{}", render_table(&llm_reports));
    for report in &llm_reports {
        assert_eq!(report.messages_evaluated, 1016);
        assert!(report.terminated_early.is_none());
    }

    std::fs::create_dir_all("ranwatch-out")?;
    let mut all = ae_clean;
    all.extend(ae_manipulated);
    all.extend(llm_reports);
    write_combined_csv(&all, "ranwatch-out/full_comparison.csv".as_ref())?;
    println!(
        "\nwrote ranwatch-out/full_comparison.csv; total runtime {:.1}s",
        started.elapsed().as_secs_f64()
    );
    Ok(())
}
