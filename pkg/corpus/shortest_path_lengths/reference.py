INF = 10 ** 9


def shortest_path_lengths(n, edges):
    lengths = [[0 if i == j else INF for j in range(n)] for i in range(n)]
    for u, v, w in edges:
        lengths[u][v] = min(lengths[u][v], w)
    for k in range(n):
        for i in range(n):
            for j in range(n):
                via = lengths[i][k] + lengths[k][j]
                if via < lengths[i][j]:
                    lengths[i][j] = via
    return lengths
