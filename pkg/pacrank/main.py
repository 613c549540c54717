# pacrank/main.py
import os
import sys

import typer

# Add parent directory to path to fix imports when running directly
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from pacrank.api.algorithms import max_command, rank_bsr_command, rank_merge_command
from pacrank.api.bench import experiment_command, history_command, sweep_command, verify_model_command

app = typer.Typer(
    name="pacrank",
    help="PAC maximum selection and ranking from noisy pairwise duels.",
    no_args_is_help=True,
    add_completion=False,
)

# algorithms
app.command("max")(max_command)
app.command("rank-merge")(rank_merge_command)
app.command("rank-bsr")(rank_bsr_command)

# benchmarking
app.command("verify-model")(verify_model_command)
app.command("experiment")(experiment_command)
app.command("sweep")(sweep_command)
app.command("history")(history_command)

# This block allows the CLI to be run directly using 'python pacrank/main.py'
if __name__ == "__main__":
    app()
