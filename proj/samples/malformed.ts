ts 3
0 1
1 x
end
