import heapq


def dijkstra(graph, source):
    dist = {source: 0}
    heap = [(0, source)]
    while heap:
        d, node = heapq.heappop(heap)
        if d > dist.get(node, float("inf")):
            continue
        for nxt, weight in graph.get(node, []):
            nd = d + weight
            if nd < dist.get(nxt, float("inf")):
                dist[nxt] = nd
                heapq.heappush(heap, (nd, nxt))
    return dist


def main():
    n, m = map(int, input().split())
    graph = {}
    for _ in range(m):
        a, b, w = map(int, input().split())
        graph.setdefault(a, []).append((b, w))
    dist = dijkstra(graph, 0)
    print(" ".join(str(dist.get(i, -1)) for i in range(n)))


main()
