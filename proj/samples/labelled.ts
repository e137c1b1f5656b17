# initial preorder from labels: states with different labels are unrelated
ts 4
0 1
1 0
2 3
3 3
end
label 0 p
label 1 p
label 2 p
label 3 q
