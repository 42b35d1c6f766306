import heapq


def shortest_path_length(length_by_edge, startnode, goalnode):
    unvisited = [(0, 0, startnode)]
    visited = set()
    counter = 1
    while unvisited:
        distance, _, node = heapq.heappop(unvisited)
        if node is goalnode:
            return distance
        if node in visited:
            continue
        visited.add(node)
        for nextnode in node.successors:
            if nextnode in visited:
                continue
            heapq.heappush(
                unvisited, (length_by_edge[node, nextnode], counter, nextnode)
            )
            counter += 1
    return -1
