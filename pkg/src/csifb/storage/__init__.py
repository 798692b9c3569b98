from csifb.storage.covariance_file import load_model, save_model
from csifb.storage.tables import read_table, render_table, write_table

__all__ = [
    "load_model",
    "read_table",
    "render_table",
    "save_model",
    "write_table",
]
