"""
Report writer
Emits bench rows and sweep tables as CSV or JSON through pandas
"""

import sys
import os

import pandas as pd

sys.path.append(os.path.dirname(os.path.dirname(os.path.dirname(__file__))))

from src.utils.logger import setup_logger

logger = setup_logger('report_writer')

REPORT_COLUMNS = ['law', 'method', 'd', 'p', 'eps', 'trials', 'mean_T', 'std_T', 'lower', 'upper', 'pass', 'seconds']
FORMATS = ('csv', 'json')


def render_table(records, columns, fmt='csv'):
    """
    Render records with a fixed column order

    Args:
        records: List of dicts
        columns: Column order (also the CSV header)
        fmt: 'csv' or 'json'

    Returns:
        str: CSV text (empty cells for missing values) or a JSON array of records
    """
    if fmt not in FORMATS:
        raise ValueError(f"Unknown format {fmt!r}; expected one of {FORMATS}")
    df = pd.DataFrame.from_records(records, columns=columns)
    if fmt == 'json':
        return df.to_json(orient='records') + '\n'
    return df.to_csv(index=False, lineterminator='\n')


def render_report(rows, fmt='csv'):
    """Render bench ReportRows with the stable report header"""
    return render_table([row.as_record() for row in rows], REPORT_COLUMNS, fmt)


def write_output(text, out=None):
    """Write rendered output to a file, or to stdout when out is None"""
    if out is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out))
    os.makedirs(directory, exist_ok=True)
    with open(out, 'w', encoding='utf-8', newline='') as f:
        f.write(text)
    logger.info(f"✓ Report saved to: {os.path.abspath(out)}")
