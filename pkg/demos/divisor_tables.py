"""Build divisor tables, cross-check the two summatory routes, and
round-trip a table through the on-disk cache.

Run as:  python3 demos/divisor_tables.py
"""

import tempfile
import time

import numpy as np

from divisorlab import sieve_dk
from divisorlab.cache import cache_table, load_table
from divisorlab.divisor_core import summatory_dk


def main() -> None:
    t0 = time.perf_counter()
    table = sieve_dk(3, 10**6)
    print(f"sieved d_3 up to 10^6 in {time.perf_counter() - t0:.2f}s")

    print("\nsample values (d_3 counts ordered factorisations into 3 parts):")
    for n in (1, 2, 12, 64, 5040, 999983):
        print(f"  d_3({n}) = {table.d(n)}")

    print("\nsummatory function, prefix sums vs the hyperbola method:")
    for x in (10**3, 10**5, 10**6):
        direct = int(table.prefix[x])
        hyper = summatory_dk(3, float(x), method="hyperbola")
        flag = "ok" if direct == hyper else "MISMATCH"
        print(f"  D_3({x:>9,}) = {direct:>12,}   hyperbola {hyper:>12,}   {flag}")

    with tempfile.TemporaryDirectory() as tmp:
        handle = cache_table(2, 10**5, tmp)
        print(f"\ncached d_2 table: {handle.size_bytes:,} bytes, "
              f"crc32 {handle.checksum:#010x}")
        again = load_table(handle.path)
        same = np.array_equal(again.values, handle.table.values)
        print(f"reloaded from disk, values identical: {same}")


if __name__ == "__main__":
    main()
