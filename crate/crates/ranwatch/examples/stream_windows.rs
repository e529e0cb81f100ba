//! Streaming window semantics: every message becomes the `latest` of
//! exactly one window, carrying up to w-1 stream predecessors and the most
//! recent message from the same UE.
//!
//! ```bash
//! cargo run -p ranwatch --example stream_windows
//! ```

use anyhow::Result;

use ranwatch::forge::{generate_benign, ForgeConfig};
use ranwatch::window::{stream_windows, window_for};

fn main() -> Result<()> {
    let config = ForgeConfig {
        n_ue: 3,
        target_total: 36,
        n_attacks: 0,
        n_hypoglyph_attacks: 0,
        n_hypoglyph_normals: 0,
        ..ForgeConfig::default()
    };
    let views: Vec<_> = generate_benign(&config)?.iter().map(|m| m.view()).collect();
    println!("stream of {} messages over 3 UEs (12-message sessions)\n", views.len());

    // w = 1: no stream context, but the same-UE predecessor is still there
    let w1 = window_for(&views, 13, 1)?;
    println!("w=1 window at seq 13 (second message of UE 1):");
    println!("  context: {} messages", w1.context.len());
    println!("  ue_previous: {}", w1.ue_previous.as_ref().map(|m| m.render()).unwrap());
    println!("  latest:      {}", w1.latest.render());

    // w = 10: nine predecessors, overlapping with the previous window
    let w10 = window_for(&views, 13, 10)?;
    println!("\nw=10 window at seq 13:");
    for msg in &w10.context {
        println!("  context seq {:2}  {}", msg.seq, msg.render());
    }
    println!("  latest  seq 13  {}", w10.latest.render());

    // session boundary: the first message of a UE has no ue_previous
    let boundary = window_for(&views, 12, 5)?;
    println!("\nw=5 window at seq 12 (UE 1 session start):");
    println!("  ue_previous present? {}", boundary.ue_previous.is_some());
    println!("  context still spans the previous UE: seqs {:?}",
        boundary.context.iter().map(|m| m.seq).collect::<Vec<_>>());

    // streaming: exactly one window per message, in order
    let count = stream_windows(&views, 10)?.count();
    println!("\nstream_windows yields {count} windows for {} messages", views.len());

    let mut overlap_checks = 0;
    let windows: Vec<_> = stream_windows(&views, 4)?.collect();
    for pair in windows.windows(2) {
        assert_eq!(pair[1].context.last().unwrap().seq, pair[0].latest.seq);
        overlap_checks += 1;
    }
    println!("verified overlap adjacency across {overlap_checks} consecutive window pairs");
    Ok(())
}
