from typing import List, Sequence

def _reduce_rows(rows: Sequence[Sequence[int]], p: int) -> List[List[int]]:
    return [[x % p for x in row] for row in rows]

def row_echelon(rows: Sequence[Sequence[int]], p: int) -> List[List[int]]:
    """
    Reduce rows over F_p to echelon form with unit pivots.
    Args:
        rows: integer rows, all of the same length
        p: prime modulus
    Returns:
        list: the non-zero echelon rows, one per pivot
    """
    mat = _reduce_rows(rows, p)
    if not mat:
        return []
    ncols = len(mat[0])
    pivot_row = 0
    for col in range(ncols):
        pivot = next((i for i in range(pivot_row, len(mat)) if mat[i][col] != 0), None)
        if pivot is None:
            continue
        mat[pivot_row], mat[pivot] = mat[pivot], mat[pivot_row]
        inv = pow(mat[pivot_row][col], -1, p)
        mat[pivot_row] = [(x * inv) % p for x in mat[pivot_row]]
        for i in range(len(mat)):
            if i != pivot_row and mat[i][col] != 0:
                factor = mat[i][col]
                mat[i] = [(a - factor * b) % p for a, b in zip(mat[i], mat[pivot_row])]
        pivot_row += 1
        if pivot_row == len(mat):
            break
    return mat[:pivot_row]

def rank_mod_p(rows: Sequence[Sequence[int]], p: int) -> int:
    return len(row_echelon(rows, p))

def in_span_mod_p(vector: Sequence[int], rows: Sequence[Sequence[int]], p: int) -> bool:
    """True iff vector lies in the F_p-span of rows."""
    if not rows:
        return all(x % p == 0 for x in vector)
    return rank_mod_p(list(rows) + [vector], p) == rank_mod_p(rows, p)

def det_mod_p(matrix: Sequence[Sequence[int]], p: int) -> int:
    """
    Determinant of a square matrix over F_p by Gaussian elimination.
    Returns the residue in [0, p).
    """
    n = len(matrix)
    mat = _reduce_rows(matrix, p)
    if any(len(row) != n for row in mat):
        raise ValueError("determinant needs a square matrix")
    det = 1
    for col in range(n):
        pivot = next((i for i in range(col, n) if mat[i][col] != 0), None)
        if pivot is None:
            return 0
        if pivot != col:
            mat[col], mat[pivot] = mat[pivot], mat[col]
            det = -det
        det = (det * mat[col][col]) % p
        inv = pow(mat[col][col], -1, p)
        for i in range(col + 1, n):
            if mat[i][col] != 0:
                factor = (mat[i][col] * inv) % p
                mat[i] = [(a - factor * b) % p for a, b in zip(mat[i], mat[col])]
    return det % p

if __name__ == "__main__":
    print(rank_mod_p([[1, 2], [2, 4]], 7))
    print(det_mod_p([[1, 2], [3, 4]], 7))
