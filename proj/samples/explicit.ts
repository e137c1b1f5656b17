# explicit partition and order over its blocks
ts 5
0 1
0 2
3 4
4 4
end
blocks
0: 0 3
1: 1 2 4
end
rel
1 0
end
