# 0 -> 1 -> 2, universal initial preorder
ts 3
0 1
1 2
end
