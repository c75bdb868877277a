import java.util.ArrayList;
import java.util.Arrays;
import java.util.List;
import java.util.Map;
import java.util.Scanner;
import java.util.TreeMap;

public class Anagrams {
    static String signature(String word) {
        char[] chars = word.toLowerCase().toCharArray();
        Arrays.sort(chars);
        return new String(chars);
    }

    public static void main(String[] args) {
        Scanner in = new Scanner(System.in);
        Map<String, List<String>> groups = new TreeMap<>();
        while (in.hasNext()) {
            String word = in.next();
            groups.computeIfAbsent(signature(word), key -> new ArrayList<>()).add(word);
        }
        for (List<String> group : groups.values()) {
            System.out.println(String.join(" ", group));
        }
    }
}
